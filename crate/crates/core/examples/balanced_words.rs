//! Morphic words, k-Fibonacci words and balanced-word counts.

use fiblab::words::{self, Morphism, Word};

fn main() -> fiblab::Result<()> {
    let fib = words::morphic_prefix(&Morphism::fibonacci(), 0, 34)?;
    let tm = words::morphic_prefix(&Morphism::thue_morse(), 0, 32)?;
    println!("fibonacci  {fib}");
    println!("thue-morse {tm}");
    for k in 1..=3 {
        println!("f_(k={k},5)  {}  lengths {:?}", words::kfib_word(k, 5)?, words::kfib_lengths(k as u64, 6));
    }

    for w in [fib.clone(), tm.clone(), Word::parse_binary("0010011")?] {
        let report = words::is_balanced(&w)?;
        match report.witness {
            None => println!("{w}: balanced"),
            Some((heavy, light)) => println!("{w}: unbalanced, e.g. {heavy} vs {light}"),
        }
    }

    for n in 1..=12u32 {
        let formula = words::balanced_formula(n.into())?;
        let brute = words::count_balanced_bruteforce(n)?;
        println!("balanced words of length {n:>2}: {formula} (enumerated {brute})");
    }
    println!("length 1000: {}", words::balanced_formula(1000)?);
    Ok(())
}
