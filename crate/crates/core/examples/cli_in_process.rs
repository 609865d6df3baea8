//! Drives the command-line interface without spawning a process.

use fiblab::cli::execute;

fn main() {
    for args in [
        "fiblab zeckendorf encode --value 1000 --format plain",
        "fiblab words count --n 4 --method brute",
        "fiblab identities check --id dflemma --k 2 --n 2 --format plain",
    ] {
        let out = execute(args.split_whitespace());
        print!("$ {args}\n{}exit {}\n\n", out.stdout, out.code);
    }
}
