//! Zeckendorf representations with F_0 = F_1 = 1.

use fiblab::zeckendorf;

fn main() -> fiblab::Result<()> {
    for a in [1u64, 4, 12, 100, 1_000_000] {
        let rep = zeckendorf::encode_u64(a)?;
        let terms: Vec<String> = rep.indices().iter().map(|i| format!("F{i}")).collect();
        println!("{a:>8} = {}", terms.join(" + "));
        assert_eq!(zeckendorf::decode(&rep)?, a.into());
    }

    // The exhaustive oracle finds no second non-adjacent sum.
    let a = 100;
    let count = zeckendorf::uniqueness_oracle(a, zeckendorf::covering_index(a));
    println!("representations of {a} found by exhaustive search: {count}");
    Ok(())
}
