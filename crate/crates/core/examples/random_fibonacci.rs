//! Random Fibonacci sequences: Monte Carlo growth rate, exact expectations,
//! and the cubic governing the growth of the mean.

use fiblab::fibcore::{rational_to_decimal, Rational};
use fiblab::randomfib;

fn main() -> fiblab::Result<()> {
    let walk = randomfib::simulate_walk(20, 3)?;
    let values: Vec<String> = walk.values.iter().map(|v| v.to_string()).collect();
    println!("one walk: {}", values.join(" "));

    let est = randomfib::estimate_viswanath(500, 20_000, 1)?;
    println!(
        "|t_n|^(1/n) over {} walks of length {}: {:.6} (se of log rate {:.2e})",
        est.trials, est.n, est.estimate, est.standard_error
    );

    for n in [3u32, 4, 5, 10, 16, 20, 24] {
        let e = randomfib::exact_expectation(n)?;
        print!("E|t_{n}| = {e}");
        if n > 3 {
            let ratio = &e / &randomfib::exact_expectation(n - 1)?;
            print!("  E|t_{n}|/E|t_{}| = {}", n - 1, rational_to_decimal(&ratio, 6));
        }
        println!();
    }

    let tol = Rational::new(1.into(), 1_000_000_000_000i64.into());
    let root = randomfib::rittaud_root(&tol)?;
    println!(
        "root of x^3 - 2x^2 - 1: {}, root - 1: {}",
        rational_to_decimal(&root.root(), 10),
        rational_to_decimal(&root.growth_rate(), 8)
    );
    Ok(())
}
