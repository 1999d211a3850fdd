//! Builds an instance from TSPLIB coordinates with seeded package masses
//! and prints it in the native text format.

use ldtsp::instance::{generate_masses, make_instance, parse_tsplib, read_instance, write_instance, DEFAULT_ALPHA};

fn main() {
    let text = include_str!("../data/ulysses16.tsp");
    let nodes = parse_tsplib(text).expect("bundled file parses");
    let masses = generate_masses(nodes.len() - 1, 42);
    let inst = make_instance(nodes, None, &masses, 5.0, DEFAULT_ALPHA).expect("valid instance");
    let out = write_instance(&inst);
    print!("{out}");
    let back = read_instance(&out).expect("round trip");
    assert_eq!(write_instance(&back), out);
    eprintln!(
        "{} targets, package mass {:.1}, unladen mass {:.1}",
        inst.n_targets(),
        inst.package_total(),
        inst.unladen()
    );
}
