//! Hopf structure of the Jordanian algebra in the `G` presentation, and the
//! triangular braiding matrix.

use hlobachevsky::hopf::rmatrix::rmatrix_checks;
use hlobachevsky::hopf::uh::UhElement;
use hlobachevsky::hopf::{fun, hopf_suite};

fn main() {
    let jm = UhElement::jm();
    println!("Δ(J-) = {}", jm.coproduct());
    println!("S(J-) = {}", jm.antipode());
    println!("(J-)* = {}", jm.star());
    println!("[J3, J-] = {}", UhElement::j3().commutator(&jm));
    println!("quantum determinant: {}", fun::determinant());

    let mut rep = rmatrix_checks();
    rep.extend(hopf_suite());
    let failed = rep.failures().count();
    println!("{} checks, {failed} failed", rep.len());
    for r in rep.results().iter().take(6) {
        println!("  {:?} {}", r.status, r.check);
    }
}
