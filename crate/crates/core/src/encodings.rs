//! Integer encodings used by the universal-function constructions.
//!
//! Everything here works over the positive integers. Functions taking a
//! [`UBig`] panic when handed zero; that is a caller bug, not an input the
//! constructions ever produce.

use dashu_int::ops::{BitTest, SquareRoot};
use dashu_int::{UBig, Word};

const WORD_BITS: usize = Word::BITS as usize;

fn assert_positive(n: &UBig, what: &str) {
    assert!(!n.is_zero(), "{what} must be a positive integer");
}

/// `phi(n) = max { k : 2^(k-1) divides n }`, i.e. the 2-adic valuation plus one.
pub fn phi(n: &UBig) -> u64 {
    let zeros = n
        .trailing_zeros()
        .expect("phi is only defined on positive integers");
    zeros as u64 + 1
}

/// [`phi`] on a machine word.
pub fn phi_u64(n: u64) -> u64 {
    assert!(n >= 1, "phi is only defined on positive integers");
    u64::from(n.trailing_zeros()) + 1
}

/// Number of `k` in `[1, limit]` with `phi(k) = n`.
///
/// The fiber of `n` is the multiples of `2^(n-1)` that are not multiples of
/// `2^n`, so the count is `floor(limit / 2^(n-1)) - floor(limit / 2^n)`.
pub fn phi_preimage_count(n: u64, limit: u64) -> u64 {
    assert!(n >= 1, "phi fibers are indexed by positive integers");
    let multiples = |k: u64| if k >= 64 { 0 } else { limit >> k };
    multiples(n - 1) - multiples(n)
}

/// Number of bits in the binary expansion of `n`.
pub fn bit_len(n: &UBig) -> usize {
    n.bit_len()
}

struct BitBuf {
    words: Vec<Word>,
}

impl BitBuf {
    fn with_bits(bits: usize) -> Self {
        Self {
            words: vec![0; bits.div_ceil(WORD_BITS)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    fn finish(self) -> UBig {
        UBig::from_words(&self.words)
    }
}

/// The injective pairing `f(e, x)`.
///
/// With `e = e_1 e_2 ... e_n` and `x = x_1 ... x_m` in binary, the result
/// has binary expansion `e_1 0 e_2 0 ... e_n 1 x_1 ... x_m`. Consequently
/// `interleave(e, x) < 2^(2n + 1) * x`.
pub fn interleave(e: &UBig, x: &UBig) -> UBig {
    assert_positive(e, "interleave index");
    assert_positive(x, "interleave argument");
    let n = e.bit_len();
    let m = x.bit_len();
    let mut buf = BitBuf::with_bits(2 * n + m);
    for (slot, word) in buf.words.iter_mut().zip(x.as_words()) {
        *slot = *word;
    }
    // Separator after the last bit of e.
    buf.set(m);
    for i in (0..n).filter(|&i| e.bit(i)) {
        buf.set(m + 2 * i + 1);
    }
    buf.finish()
}

/// Partial inverse of [`interleave`]: `Some((e, x))` exactly when `z` is in
/// its image.
pub fn deinterleave(z: &UBig) -> Option<(UBig, UBig)> {
    assert_positive(z, "deinterleave input");
    // `rest` counts the bits not yet consumed; the next one is at rest - 1.
    let mut rest = z.bit_len();
    let mut e_bits = Vec::new();
    loop {
        if rest < 2 {
            return None;
        }
        e_bits.push(z.bit(rest - 1));
        let separator = z.bit(rest - 2);
        rest -= 2;
        if separator {
            break;
        }
    }
    // The argument must be non-empty and start with a one.
    if rest == 0 || !z.bit(rest - 1) {
        return None;
    }

    let mut e = BitBuf::with_bits(e_bits.len());
    for (i, _) in e_bits.iter().rev().enumerate().filter(|(_, &b)| b) {
        e.set(i);
    }
    let high = (z >> rest) << rest;
    Some((e.finish(), z - high))
}

/// Cantor pairing on `Z+ x Z+`: `pair(i, j) = (i+j-2)(i+j-1)/2 + i`.
pub fn pair(i: &UBig, j: &UBig) -> UBig {
    assert_positive(i, "pair component");
    assert_positive(j, "pair component");
    let diagonal = i + j - UBig::from(2u8);
    triangular(&diagonal) + i
}

/// Inverse of [`pair`].
pub fn unpair(z: &UBig) -> (UBig, UBig) {
    assert_positive(z, "unpair input");
    let offset = z - UBig::ONE;
    let root = (&offset * UBig::from(8u8) + UBig::ONE).sqrt();
    let diagonal = (root - UBig::ONE) >> 1;
    let i = &offset - triangular(&diagonal) + UBig::ONE;
    let j = diagonal + UBig::from(2u8) - &i;
    (i, j)
}

/// Convenience wrapper over [`pair`] for small operands.
pub fn pair_u64(i: u64, j: u64) -> UBig {
    pair(&UBig::from(i), &UBig::from(j))
}

fn triangular(d: &UBig) -> UBig {
    (d * (d + UBig::ONE)) >> 1
}

/// Floor square root by integer Newton iteration.
pub fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    // Start at a power of two no smaller than the root; the iteration then
    // decreases monotonically to the floor.
    let shift = (u64::BITS - n.leading_zeros()).div_ceil(2);
    let mut x = 1u64 << shift;
    loop {
        let next = (x + n / x) / 2;
        if next >= x {
            return x;
        }
        x = next;
    }
}

pub fn is_square_u64(n: u64) -> bool {
    let r = isqrt_u64(n);
    r * r == n
}

/// Returns `y` with `y * y = x` when `x` is a perfect square.
pub fn square_split(x: &UBig) -> Option<UBig> {
    assert_positive(x, "square_split input");
    if let Ok(small) = u64::try_from(x) {
        let root = isqrt_u64(small);
        return (root * root == small).then(|| UBig::from(root));
    }
    let root = x.sqrt();
    (&root * &root == *x).then_some(root)
}
