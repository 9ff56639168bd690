//! Exact Bernoulli numbers, memoized.

use std::sync::Mutex;

use rug::{Integer, Rational};

use super::hpreal::HPReal;

static TABLE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    let mut table = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    // sum_{j=0..m} C(m+1, j) B_j = 0
    while table.len() <= n {
        let m = table.len();
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            if j > 1 && j % 2 == 1 {
                continue;
            }
            let c = Integer::from(m as u32 + 1).binomial(j as u32);
            acc += Rational::from(c) * b;
        }
        table.push(-acc / Integer::from(m as u32 + 1));
    }
    table[n].clone()
}

/// `B_{2k} / (2k)!` rounded to `prec` bits.
pub fn bernoulli_over_factorial(two_k: usize, prec: u32) -> HPReal {
    let q = bernoulli(two_k) / Integer::from(Integer::factorial(two_k as u32));
    HPReal::from_rational(&q, prec)
}
