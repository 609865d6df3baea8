//! Exact checks of Fibonacci identities, including one that fails.

use fiblab::fibcore::FibConvention;
use fiblab::identities::{self, Verdict};

fn main() {
    for k in 1..=3 {
        let r = identities::check_reciprocal_sum(k, 50);
        println!("reciprocal k={k}: {:?}, rhs {}", r.verdict, r.rhs.lo());
    }

    let r = identities::check_symmetry(3, 2);
    println!("symmetry a=3 b=2: {:?}, both sides {}", r.verdict, r.lhs.lo());

    let r = identities::check_sqrt5_cf(10);
    println!("sqrt5 sums: {:?}, in [{}, {}]", r.verdict, r.rhs.lo().to_decimal(12), r.rhs.hi().to_decimal(12));

    for conv in [FibConvention::Classic, FibConvention::Shifted] {
        let r = identities::check_df_lemma(2, 2, conv);
        if let (Verdict::Refuted, Some(w)) = (r.verdict, &r.witness) {
            println!("sum-of-powers lemma k=2 n=2 ({}): {} != {}", conv.name(), w.lhs, w.rhs);
        }
    }

    let reports = identities::sweep();
    let refuted = reports.iter().filter(|r| r.is_refuted()).count();
    println!("full sweep: {} checks, {refuted} refuted", reports.len());
}
