//! The 226-bit chromosome and its mapping to [`MicroParams`].
//!
//! Layout, every integer read most-significant bit first:
//!
//! | bits      | content                                                          |
//! |-----------|------------------------------------------------------------------|
//! | 0..208    | 13 groups of (12-bit coefficient, 4-bit exponent), term order    |
//! | 208..212  | `r`   = round(k / 15 * 8)                                         |
//! | 212..216  | `i_f` = k / 15                                                    |
//! | 216..219  | `w1`  = k / 7                                                     |
//! | 219..222  | `w2`  = k / 7                                                     |
//! | 222..226  | `w3`  = k / 15 * 8                                                |
//!
//! Coefficients map linearly from `0..=4095` onto `[-10000, 10000]`; exponents are `k - 7`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{MicroParams, PFTerm, C_LIMIT, E_MAX, E_MIN, N_TERMS};
use crate::influence::{IMParams, MAX_BIAS, MAX_RANGE};
use crate::scalar::Scalar;

pub const GENOME_BITS: usize = 226;
pub const C_BITS: usize = 12;
pub const E_BITS: usize = 4;
pub const TERM_BITS: usize = C_BITS + E_BITS;
pub const PF_BITS: usize = TERM_BITS * N_TERMS;
const R_BITS: usize = 4;
const IF_BITS: usize = 4;
const W1_BITS: usize = 3;
const W2_BITS: usize = 3;
const W3_BITS: usize = 4;

const C_MAX_CODE: u32 = (1 << C_BITS) - 1;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Genome(Vec<bool>);

impl Genome {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.len() != GENOME_BITS {
            return Err(Error::InvalidGenomeLength { expected: GENOME_BITS, actual: bits.len() });
        }
        Ok(Self(bits))
    }

    pub fn zeros() -> Self {
        Self(vec![false; GENOME_BITS])
    }

    pub fn ones() -> Self {
        Self(vec![true; GENOME_BITS])
    }

    /// 226 independent fair bits.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self((0..GENOME_BITS).map(|_| rng.random::<bool>()).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn decode<T: Scalar>(&self) -> MicroParams<T> {
        decode_unchecked(&self.0)
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genome({self})")
    }
}

impl FromStr for Genome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidGenomeChar(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }
}

/// Decodes a raw bit string, rejecting anything but exactly 226 bits.
pub fn decode<T: Scalar>(bits: &[bool]) -> Result<MicroParams<T>> {
    if bits.len() != GENOME_BITS {
        return Err(Error::InvalidGenomeLength { expected: GENOME_BITS, actual: bits.len() });
    }
    Ok(decode_unchecked(bits))
}

/// Coefficient for a 12-bit code.
pub fn coefficient_from_code(k: u32) -> f64 {
    -C_LIMIT + f64::from(k) / f64::from(C_MAX_CODE) * (2.0 * C_LIMIT)
}

fn r_from_code(k: u32) -> u32 {
    (f64::from(k) / 15.0 * f64::from(MAX_RANGE)).round() as u32
}

fn decode_unchecked<T: Scalar>(bits: &[bool]) -> MicroParams<T> {
    let mut reader = BitReader { bits, pos: 0 };
    let pf = std::array::from_fn(|_| {
        let c = coefficient_from_code(reader.take(C_BITS));
        let e = E_MIN + reader.take(E_BITS) as i32;
        PFTerm::new(T::lit(c), e)
    });
    let r = r_from_code(reader.take(R_BITS));
    let i_f = f64::from(reader.take(IF_BITS)) / 15.0;
    let w1 = f64::from(reader.take(W1_BITS)) / 7.0;
    let w2 = f64::from(reader.take(W2_BITS)) / 7.0;
    let w3 = f64::from(reader.take(W3_BITS)) / 15.0 * MAX_BIAS;
    debug_assert_eq!(reader.pos, GENOME_BITS);
    MicroParams {
        pf,
        im: IMParams { r, i_f: T::lit(i_f), w1: T::lit(w1), w2: T::lit(w2), w3: T::lit(w3) },
    }
}

/// Nearest-code encoding; `decode(encode(p))` is within one quantization step of `p`.
pub fn encode<T: Scalar>(p: &MicroParams<T>) -> Result<Genome> {
    p.validate()?;
    let mut w = BitWriter(Vec::with_capacity(GENOME_BITS));
    for t in &p.pf {
        let c = t.c.to_f64_lossy();
        let k = ((c + C_LIMIT) / (2.0 * C_LIMIT) * f64::from(C_MAX_CODE)).round();
        w.put(k.clamp(0.0, f64::from(C_MAX_CODE)) as u32, C_BITS);
        w.put((t.e - E_MIN) as u32, E_BITS);
    }
    debug_assert!((E_MAX - E_MIN) as u32 == (1 << E_BITS) - 1);
    let r_code = (0..(1u32 << R_BITS))
        .min_by_key(|&k| (r_from_code(k) as i64 - i64::from(p.im.r)).abs())
        .unwrap_or(0);
    w.put(r_code, R_BITS);
    w.put(quantize(p.im.i_f.to_f64_lossy(), IF_BITS), IF_BITS);
    w.put(quantize(p.im.w1.to_f64_lossy(), W1_BITS), W1_BITS);
    w.put(quantize(p.im.w2.to_f64_lossy(), W2_BITS), W2_BITS);
    w.put(quantize(p.im.w3.to_f64_lossy() / MAX_BIAS, W3_BITS), W3_BITS);
    Genome::from_bits(w.0)
}

/// Nearest code for a value in [0, 1].
fn quantize(v: f64, bits: usize) -> u32 {
    let max = f64::from((1u32 << bits) - 1);
    (v * max).round().clamp(0.0, max) as u32
}

struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl BitReader<'_> {
    fn take(&mut self, n: usize) -> u32 {
        let v = self.bits[self.pos..self.pos + n]
            .iter()
            .fold(0u32, |acc, &b| (acc << 1) | u32::from(b));
        self.pos += n;
        v
    }
}

struct BitWriter(Vec<bool>);

impl BitWriter {
    fn put(&mut self, v: u32, n: usize) {
        self.0.extend((0..n).rev().map(|i| (v >> i) & 1 == 1));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{term_index, Factor, Relation};
    use crate::rng::{stream_rng, Stream};
    use proptest::prelude::*;

    #[test]
    fn layout_sums_to_226() {
        assert_eq!(PF_BITS + R_BITS + IF_BITS + W1_BITS + W2_BITS + W3_BITS, GENOME_BITS);
        assert_eq!(PF_BITS, 208);
    }

    #[test]
    fn all_zero_decodes_to_minima() {
        let p = Genome::zeros().decode::<f64>();
        assert!(p.pf.iter().all(|t| t.c == -10_000.0 && t.e == -7));
        assert_eq!(p.im, IMParams { r: 0, i_f: 0.0, w1: 0.0, w2: 0.0, w3: 0.0 });
    }

    #[test]
    fn all_one_decodes_to_maxima() {
        let p = Genome::ones().decode::<f64>();
        assert!(p.pf.iter().all(|t| t.c == 10_000.0 && t.e == 8));
        assert_eq!(p.im, IMParams { r: 8, i_f: 1.0, w1: 1.0, w2: 1.0, w3: 8.0 });
    }

    #[test]
    fn mid_coefficient_code_is_pinned() {
        // 0b1000_0000_0000 = 2048 -> -10000 + 2048 / 4095 * 20000
        let mut g = Genome::zeros();
        g.bits_mut()[0] = true;
        let c = g.decode::<f64>().pf[0].c;
        assert!((c - 2.442_002_442_002_442).abs() < 1e-9, "{c}");
        assert!((coefficient_from_code(2048) - 2.442_002_442).abs() < 1e-9);
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(matches!(
            decode::<f64>(&[true; 225]),
            Err(Error::InvalidGenomeLength { expected: 226, actual: 225 })
        ));
        assert!(Genome::from_bits(vec![false; 227]).is_err());
        assert!("01x".parse::<Genome>().is_err());
    }

    #[test]
    fn encode_extremes_fill_fields() {
        let mut p = Genome::ones().decode::<f64>();
        p.pf[0].c = -10_000.0;
        let g = encode(&p).unwrap();
        assert!(g.bits()[0..12].iter().all(|&b| !b));

        let mut p = Genome::zeros().decode::<f64>();
        p.pf[term_index(Factor::Health, Relation::FriendAttract)].e = 8;
        let g = encode(&p).unwrap();
        let at = term_index(Factor::Health, Relation::FriendAttract) * TERM_BITS + C_BITS;
        assert!(g.bits()[at..at + 4].iter().all(|&b| b));
    }

    #[test]
    fn encode_rejects_out_of_range() {
        let mut p = MicroParams::<f64>::inert();
        p.pf[3].c = 20_000.0;
        assert!(matches!(encode(&p), Err(Error::InvalidParams(_))));
        let mut p = MicroParams::<f64>::inert();
        p.im.r = 12;
        assert!(encode(&p).is_err());
    }

    #[test]
    fn every_range_value_is_reachable() {
        for r in 0..=8 {
            let mut p = MicroParams::<f64>::inert();
            p.im.r = r;
            assert_eq!(encode(&p).unwrap().decode::<f64>().im.r, r);
        }
    }

    #[test]
    fn random_genome_is_seed_deterministic() {
        let a = Genome::random(&mut stream_rng(1, Stream::Evolution));
        let b = Genome::random(&mut stream_rng(1, Stream::Evolution));
        let c = Genome::random(&mut stream_rng(2, Stream::Evolution));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.to_string().parse::<Genome>().unwrap(), a);
    }

    #[test]
    fn random_popcount_averages_half() {
        let mut rng = stream_rng(3, Stream::Evolution);
        let n = 4000;
        let total: usize = (0..n).map(|_| Genome::random(&mut rng).count_ones()).sum();
        let mean = total as f64 / n as f64;
        // sd of the mean = sqrt(226 / 4) / sqrt(4000) ~ 0.12
        assert!((mean - 113.0).abs() < 0.6, "{mean}");
    }

    #[test]
    fn quantization_grid_sizes() {
        let mut cs = std::collections::BTreeSet::new();
        let mut es = std::collections::BTreeSet::new();
        let mut g = Genome::zeros();
        for k in 0..(1u32 << C_BITS) {
            for i in 0..C_BITS {
                g.bits_mut()[i] = (k >> (C_BITS - 1 - i)) & 1 == 1;
            }
            cs.insert(g.decode::<f64>().pf[0].c.to_bits());
        }
        for k in 0..16u32 {
            for i in 0..E_BITS {
                g.bits_mut()[C_BITS + i] = (k >> (E_BITS - 1 - i)) & 1 == 1;
            }
            es.insert(g.decode::<f64>().pf[0].e);
        }
        assert_eq!(cs.len(), 4096);
        assert_eq!(es.len(), 16);
    }

    fn genome_strategy() -> impl Strategy<Value = Genome> {
        proptest::collection::vec(any::<bool>(), GENOME_BITS).prop_map(|b| Genome::from_bits(b).unwrap())
    }

    proptest! {
        #[test]
        fn decode_is_total_and_roundtrips(g in genome_strategy()) {
            let p = g.decode::<f64>();
            prop_assert!(p.validate().is_ok());
            let again = encode(&p).unwrap().decode::<f64>();
            prop_assert_eq!(again, p);
        }

        #[test]
        fn f32_decode_roundtrips(g in genome_strategy()) {
            let p = g.decode::<f32>();
            prop_assert!(p.validate().is_ok());
            prop_assert_eq!(encode(&p).unwrap().decode::<f32>(), p);
        }
    }
}
