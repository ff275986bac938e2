//! Normal ordering on braided copies of the plane.
//!
//! Run with `cargo run --example normal_ordering`.

use hlobachevsky::plane::{self, distance_invariant, AlgebraElement, PlaneLetter};
use hlobachevsky::text::parse_plane;

fn main() {
    use PlaneLetter::*;
    // y x = x y + 2ih y
    let word = [Y(0), X(0)];
    println!("y x            = {}", plane::normal_form(&word));
    println!("y x^2 y^-1     = {}", plane::normal_form(&[Y(0), X(0), X(0), YInv(0)]));
    println!("y' x (copies)  = {}", plane::normal_form(&[Y(1), X(0)]));

    let f = parse_plane("x^2*y - i*h*x").unwrap();
    let g = parse_plane("y^-1 + x").unwrap();
    println!("({f}) ({g}) = {}", f.mul(&g));

    // the two-point invariant commutes with every generator of both copies
    let q = distance_invariant(0, 1);
    println!("Q = {q}");
    for l in [X(0), Y(0), X(1), Y(1)] {
        let c = q.commutator(&AlgebraElement::letter(l));
        println!("  [Q, {l}] = {c}");
    }
}
