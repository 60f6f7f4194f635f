//! The JSON matrix format and the report pipeline the `normdefect` binary
//! exposes, driven programmatically.
//!
//! ```bash
//! cargo run -p normdefect --example matrix_files
//! ```

use normdefect::cli::{run, Command};
use normdefect::io;
use normdefect::matrix::{re, ComplexMatrix};

fn main() {
    let dir = std::env::temp_dir().join("normdefect-example");
    std::fs::create_dir_all(&dir).unwrap();

    // matrices travel as {"rows", "cols", "entries"} with [re, im] pairs;
    // bare numbers are accepted for real input
    let chain = ComplexMatrix::superdiagonal(&[re(1.0), re(3.0), re(2.0)]);
    let path = dir.join("chain.json");
    io::write_matrix(&path, &chain).unwrap();
    println!("wrote {}:\n{}\n", path.display(), io::matrix_to_string(&chain));

    let (report, exit) = run(&Command::Analyze {
        path: path.clone(),
        tol: None,
    });
    println!("analyze exited {exit}; report:\n{}\n", report.to_json());

    // the fixtures verb materializes the built-in reference matrices
    let (report, exit) = run(&Command::Fixtures {
        name: "sqrt2shift".into(),
        out: dir.clone(),
    });
    println!("fixtures exited {exit}; defect claim: {:?}", report.defect);

    let (report, exit) = run(&Command::Verify {
        path_a: dir.join("sqrt2shift_a.json"),
        path_ext: dir.join("sqrt2shift_a_completion.json"),
        tol: None,
    });
    println!("verify exited {exit}; defect claim: {:?}", report.defect);
}
