//! Counting functions of integer sets and Fibonacci residue densities.

use fiblab::density::{self, IntegerSet};
use fiblab::fibcore::{pisano_period, rational_to_decimal};

fn main() -> fiblab::Result<()> {
    let xs = [100, 1_000, 10_000, 100_000, 1_000_000];
    for set in [IntegerSet::FibonacciValues, IntegerSet::GelfondN0] {
        let profile = density::density_profile(&set, &xs)?;
        print!("{}", profile.to_csv(8));
        if let Some(checks) = &profile.log_bound {
            for c in checks {
                println!(
                    "  x={:>7} count={} log x/log phi={:.2} ({}) corrected={:.2} ({})",
                    c.x, c.count, c.log_bound, c.log_bound_holds, c.corrected_bound, c.corrected_bound_holds
                );
            }
        }
    }

    for m in [2, 3, 5, 8, 10] {
        println!("pisano period mod {m}: {}", pisano_period(m)?);
    }
    for p in [2u64, 3, 5, 11] {
        let row: Vec<String> = (1..=4)
            .filter_map(|lambda| density::fib_residue_density(p, lambda).ok())
            .map(|d| format!("{} ({})", d.density, rational_to_decimal(&d.density, 4)))
            .collect();
        println!("p={p}: {}", row.join(", "));
    }
    Ok(())
}
