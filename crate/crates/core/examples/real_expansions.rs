//! Digit expansions in base θ and with Fibonacci denominators, all exact.

use fiblab::fibcore::{parse_real, QuadraticReal};
use fiblab::realbase;

fn main() -> fiblab::Result<()> {
    let alpha = parse_real("5/13")?;
    for (name, theta) in [
        ("2", QuadraticReal::from_integer(2)),
        ("3/2", QuadraticReal::from_ratio(3, 2)),
        ("phi", QuadraticReal::phi()),
    ] {
        let exp = realbase::theta_digits(&alpha, &theta, 20)?;
        let digits: Vec<String> = exp.digits.iter().map(|d| d.to_string()).collect();
        let a20 = realbase::theta_partial_sum(&exp, 20)?;
        println!("base {name:>3}: {}  A_20 = {}", digits.join(""), a20.to_decimal(15));
        assert!(exp.first_bound_violation().is_none());
    }

    // a = a_0 + Σ d_k / F_k, where the digits come from the ratio recursion.
    let a = parse_real("sqrt5")?;
    let rep = realbase::fib_fraction_digits(&a, 25)?;
    let digits: String = rep.digits.iter().map(|d| char::from(b'0' + d)).collect();
    println!("sqrt5 = {} + fib digits {digits}", rep.integer_part);
    println!("partial sum {} vs {}", realbase::fib_fraction_partial(&rep, 25)?.to_decimal(15), a.to_decimal(15));
    Ok(())
}
