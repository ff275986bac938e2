//! Exponentials `e^{ikx}` as formal series in `k` with coefficients in the
//! plane, and the identities they satisfy order by order.

use hlobachevsky::plane::AlgebraElement;
use hlobachevsky::series::{exp_ik, lplus_series, series_suite};

fn main() {
    let order = 4;
    println!("L+(k) = {}", lplus_series(order));
    let e = exp_ik(0, &AlgebraElement::x(0), order);
    println!("e^(ikx) to order {order}:\n{e}");

    let order = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    print!("{}", series_suite(order));
}
