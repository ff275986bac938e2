//! The deformed Laplacian on monomials, against the Hodge Laplacian
//! `-(δd + dδ)` and the undeformed operator.

use hlobachevsky::calculus::{classical_laplacian, d, hodge_laplacian, laplacian_h, Form};
use hlobachevsky::plane::AlgebraElement;
use hlobachevsky::text::parse_plane;

fn main() {
    for m in -2..=3 {
        let f = AlgebraElement::y_pow(0, m);
        println!("Δ_h y^{m} = {}", laplacian_h(&f));
    }
    for src in ["x*y^-2", "x^2", "x^2*y", "x^3*y^-1"] {
        let f = parse_plane(src).unwrap();
        let lap = laplacian_h(&f);
        let hodge = hodge_laplacian(&Form::function(f.clone()));
        let ok = hodge == Form::function(lap.clone());
        println!("f = {f}: Δ_h f = {lap}; Hodge agrees: {ok}; classical: {}", classical_laplacian(&f));
    }
    let w = d(&d(&Form::function(AlgebraElement::x(0).mul(&AlgebraElement::y(0)))));
    println!("d² (x y) is zero: {}", w.is_zero());
}
