//! Left action of the isometry algebra on the plane through the cross
//! product, with both rule tables.
//!
//! The standard table carries `h^2/4` in `[x, J- G]`; acting with the
//! relation `[J3, J-] = ...` on `x` then leaves `-h^2 G^2`. Dropping the
//! constant gives a genuine module.

use hlobachevsky::crossprod::{self, CrossAlgebra};
use hlobachevsky::hopf::uh::UhElement;
use hlobachevsky::text::parse_plane;

fn main() {
    let x = parse_plane("x").unwrap();
    let f = parse_plane("x^2*y^-1").unwrap();
    let j3g = UhElement::j3().mul(&UhElement::g());
    let jmg = UhElement::jm().mul(&UhElement::g());
    for (name, u) in [("J+", UhElement::jp()), ("G", UhElement::g()), ("J3 G", j3g), ("J- G", jmg.clone())] {
        println!("{name} · x = {}", crossprod::act(&u, &x));
        println!("{name} · x^2 y^-1 = {}", crossprod::act(&u, &f));
    }

    let consistent = CrossAlgebra::consistent().expect("consistent rules");
    println!("J- G · x without the constant: {}", consistent.act(&jmg, &x));

    crossprod::with_standard(|alg| {
        let rep = crossprod::verify_uh_relations_preserved(alg);
        for r in rep.failures() {
            println!("standard table: {} -> {}", r.check, r.witness.as_deref().unwrap_or(""));
        }
    });
    let rep = crossprod::verify_uh_relations_preserved(&consistent);
    println!("consistent table: {} relation checks, all pass = {}", rep.len(), rep.all_passed());
}
