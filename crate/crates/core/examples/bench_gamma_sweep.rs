//! Writes instances over a range of unladen mass factors plus a manifest,
//! then runs the bench command on it. Output lands in `./sweep`.

use std::fs;

use ldtsp::instance::{random_instance, write_instance};

fn main() {
    let dir = std::path::Path::new("sweep");
    fs::create_dir_all(dir).unwrap();
    let mut manifest = String::from("# instance,variant,time_limit,seed\n");
    for gamma in [0.0, 1.0, 2.0, 5.0, 10.0] {
        let inst = random_instance(9, gamma, 3);
        let file = format!("g{gamma}.ldtsp");
        fs::write(dir.join(&file), write_instance(&inst)).unwrap();
        for variant in ["core", "baseline1", "astar"] {
            manifest.push_str(&format!("{file},{variant},60,3\n"));
        }
    }
    fs::write(dir.join("manifest.txt"), manifest).unwrap();
    let args = ["ldtsp", "bench", "sweep/manifest.txt", "--out-dir", "sweep/out"];
    let code = ldtsp::cli::run(args, &mut std::io::stdout(), &mut std::io::stderr());
    println!("bench exited with {code}; see sweep/out/results.csv and the SVG plots");
}
