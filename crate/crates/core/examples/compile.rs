//! Prints the gate list for a permutation given as its image, e.g.
//! `cargo run --example compile -- 1 0 2 3 4 5 6 7`.

use nfl_core::cost::compile_permutation;
use nfl_core::model::Permutation;

fn main() {
    let image: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("indices")).collect();
    let n = image.len().trailing_zeros() as usize;
    let p = Permutation::new(image).expect("a permutation");
    print!("{}", compile_permutation(&p, n).expect("power-of-two size"));
}
