//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rational;
use crate::tableau::LinearProgram;

fn draw_row(rng: &mut ChaCha8Rng, cols: usize, bound: i64) -> Vec<i64> {
    loop {
        let row: Vec<i64> = (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect();
        if row.iter().any(|&v| v != 0) {
            return row;
        }
    }
}

fn to_lp(c: Vec<i64>, a: Vec<Vec<i64>>, b: Vec<i64>) -> LinearProgram<Rational> {
    let q = |v: Vec<i64>| v.into_iter().map(Rational::from).collect::<Vec<_>>();
    LinearProgram::with_default_names(q(c), a.into_iter().map(q).collect(), q(b))
        .expect("generated shapes are consistent")
}

/// `rows × cols` instance with integer entries in `[-bound, bound]` and no
/// all-zero row. With `feasible_bias` a 0/1 point `x*` is drawn first and every
/// `b_i` is chosen at least `a_i·x*`, so `x*` is feasible.
pub fn gen_random_lp(seed: u64, rows: usize, cols: usize, bound: i64, feasible_bias: bool) -> LinearProgram<Rational> {
    assert!(rows > 0 && cols > 0 && bound > 0, "dimensions and bound must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<i64> = (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    let x_star: Vec<i64> = (0..cols).map(|_| rng.gen_range(0..=1)).collect();
    let mut a = Vec::with_capacity(rows);
    let mut b = Vec::with_capacity(rows);
    for _ in 0..rows {
        if feasible_bias {
            let (row, lhs) = loop {
                let row = draw_row(&mut rng, cols, bound);
                let lhs: i64 = row.iter().zip(&x_star).map(|(a, x)| a * x).sum();
                if lhs <= bound {
                    break (row, lhs);
                }
            };
            b.push(rng.gen_range(lhs.max(-bound)..=bound));
            a.push(row);
        } else {
            a.push(draw_row(&mut rng, cols, bound));
            b.push(rng.gen_range(-bound..=bound));
        }
    }
    to_lp(c, a, b)
}

/// A feasible-biased instance plus the row `-a_k x ≤ -b_k - 1`, which together
/// with `a_k x ≤ b_k` admits no solution.
pub fn gen_infeasible_lp(seed: u64, rows: usize, cols: usize, bound: i64) -> LinearProgram<Rational> {
    let mut lp = gen_random_lp(seed, rows, cols, bound, true);
    let k = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15).gen_range(0..rows);
    let row = lp.matrix()[k].iter().map(|v| -v).collect();
    let rhs = -&lp.rhs()[k] - Rational::from(1);
    lp.push_row(row, rhs).expect("row width matches");
    lp
}
