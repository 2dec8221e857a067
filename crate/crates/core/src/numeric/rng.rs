//! Counter-based, splittable random streams.
//!
//! A stream is addressed by `(master_seed, stream_index)`; its state is the
//! position (`counter`, in 32-bit words) inside the ChaCha keystream selected
//! by those two values. Child streams are derived by hashing the parent index
//! with a child label, so a tree of substreams can be addressed without any
//! shared mutable state.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::complex::Cplx;

#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    inner: ChaCha8Rng,
}

impl PartialEq for RngStream {
    fn eq(&self, other: &Self) -> bool {
        self.master_seed == other.master_seed
            && self.stream_index == other.stream_index
            && self.counter() == other.counter()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_index);
        Self { master_seed, stream_index, inner }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Number of 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.inner.get_word_pos()
    }

    /// Jumps to an absolute position in the stream.
    pub fn seek(&mut self, counter: u128) {
        self.inner.set_word_pos(counter);
    }

    /// Independent child stream labelled `child`. Depends only on this
    /// stream's address, not on how much of it has been consumed.
    pub fn fork(&self, child: u64) -> RngStream {
        let index = splitmix64(self.stream_index ^ splitmix64(child.wrapping_add(0x5851_f42d_4c95_7f2d)));
        RngStream::new(self.master_seed, index)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Standard complex Gaussian: independent real and imaginary parts of variance 1/2.
    pub fn complex_normal(&mut self) -> Cplx {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Cplx::new(self.normal() * s, self.normal() * s)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_address_same_sequence() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_eq!(a, b);
    }

    #[test]
    fn seek_reproduces_suffix() {
        let mut a = RngStream::new(1, 0);
        for _ in 0..10 {
            a.next_u64();
        }
        let pos = a.counter();
        let tail: Vec<u64> = (0..5).map(|_| a.next_u64()).collect();
        let mut b = RngStream::new(1, 0);
        b.seek(pos);
        let again: Vec<u64> = (0..5).map(|_| b.next_u64()).collect();
        assert_eq!(tail, again);
    }

    #[test]
    fn fork_ignores_parent_position() {
        let a = RngStream::new(3, 11);
        let mut b = a.clone();
        b.next_u64();
        let mut fa = a.fork(5);
        let mut fb = b.fork(5);
        assert_eq!(fa.next_u64(), fb.next_u64());
    }

    #[test]
    fn distinct_streams_are_uncorrelated() {
        let n = 20_000;
        let mut a = RngStream::new(9, 0);
        let mut b = RngStream::new(9, 1);
        let xs: Vec<f64> = (0..n).map(|_| a.normal()).collect();
        let ys: Vec<f64> = (0..n).map(|_| b.normal()).collect();
        assert_ne!(xs[..8], ys[..8]);
        let corr: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / n as f64;
        // Sample correlation of independent normals has SE 1/√n.
        assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut r = RngStream::new(0, 0);
        for _ in 0..1000 {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
