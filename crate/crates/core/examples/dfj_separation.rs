//! Separates subtour cuts from an integral two-cycle point and from a
//! fractional point by depot-to-target maximum flow.

use ldtsp::instance::random_instance;
use ldtsp::model::{edge_index, LinearConstraint, VarId};
use ldtsp::solver::separate_dfj;

fn point(n: usize, arcs: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut x = vec![0.0; n * (n - 1)];
    for &(i, j, v) in arcs {
        x[edge_index(n, i, j)] = v;
    }
    x
}

fn show(label: &str, cuts: &[LinearConstraint], n: usize, x: &[f64]) {
    println!("{label}: {} cut(s)", cuts.len());
    for c in cuts {
        let lhs = c.activity(|v| match v {
            VarId::X(i, j) => x[edge_index(n, i, j)],
            _ => 0.0,
        });
        let names: Vec<String> = c.terms.iter().map(|(v, _)| v.to_string()).collect();
        println!("  {} {} {}  (lhs {lhs})", names.join(" + "), c.sense.symbol(), c.rhs);
    }
}

fn main() {
    let inst = random_instance(4, 1.0, 3);
    let x = point(5, &[(4, 0, 1.0), (0, 1, 1.0), (1, 4, 1.0), (2, 3, 1.0), (3, 2, 1.0)]);
    show("two cycles", &separate_dfj(&x, &inst), 5, &x);

    let inst = random_instance(5, 1.0, 3);
    let arcs = [(5, 0, 0.75), (0, 1, 1.0), (1, 5, 1.0), (5, 2, 0.25), (2, 3, 1.0), (3, 4, 1.0), (4, 2, 0.75), (4, 0, 0.25)];
    let x = point(6, &arcs);
    show("fractional", &separate_dfj(&x, &inst), 6, &x);
}
