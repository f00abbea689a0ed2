//! Monomial bases in 3 or 4 variables.
//!
//! Degree-d monomials are ordered lexicographically with x0 > x1 > x2 > x3 and
//! exponent vectors descending, so degree 2 in four variables reads
//! x0², x0x1, x0x2, x0x3, x1², x1x2, x1x3, x2², x2x3, x3².

use std::sync::OnceLock;

/// Largest degree for which tables are built.
pub const MAX_DEGREE: usize = 16;

/// Exponent vector; unused trailing slots are zero.
pub type Exponent = [u8; 4];

#[derive(Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree: usize,
    exps: Vec<Exponent>,
    lookup: Vec<u32>,
}

impl MonomialBasis {
    fn build(nvars: usize, degree: usize) -> Self {
        let mut exps = Vec::new();
        let mut cur = [0u8; 4];
        fill(nvars, 0, degree, &mut cur, &mut exps);
        let side = degree + 1;
        let mut lookup = vec![u32::MAX; side.pow(nvars as u32 - 1)];
        for (i, e) in exps.iter().enumerate() {
            lookup[key(e, nvars, side)] = i as u32;
        }
        MonomialBasis { nvars, degree, exps, lookup }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn len(&self) -> usize {
        self.exps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }
    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }
    pub fn exponent(&self, i: usize) -> &Exponent {
        &self.exps[i]
    }

    /// Position of `e`, which must have this basis' degree.
    #[inline]
    pub fn index(&self, e: &Exponent) -> usize {
        debug_assert_eq!(e.iter().map(|&x| x as usize).sum::<usize>(), self.degree);
        self.lookup[key(e, self.nvars, self.degree + 1)] as usize
    }
}

fn fill(nvars: usize, pos: usize, remaining: usize, cur: &mut Exponent, out: &mut Vec<Exponent>) {
    if pos == nvars - 1 {
        cur[pos] = remaining as u8;
        out.push(*cur);
        cur[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e as u8;
        fill(nvars, pos + 1, remaining - e, cur, out);
    }
    cur[pos] = 0;
}

#[inline]
fn key(e: &Exponent, nvars: usize, side: usize) -> usize {
    let mut k = 0;
    for &x in e.iter().take(nvars - 1) {
        k = k * side + x as usize;
    }
    k
}

static TERNARY: [OnceLock<MonomialBasis>; MAX_DEGREE + 1] = [const { OnceLock::new() }; MAX_DEGREE + 1];
static QUATERNARY: [OnceLock<MonomialBasis>; MAX_DEGREE + 1] = [const { OnceLock::new() }; MAX_DEGREE + 1];

/// Shared basis for `nvars` ∈ {3, 4} and `degree` ≤ [`MAX_DEGREE`].
pub fn basis(nvars: usize, degree: usize) -> &'static MonomialBasis {
    assert!(degree <= MAX_DEGREE, "degree {degree} exceeds the supported maximum {MAX_DEGREE}");
    let slot = match nvars {
        3 => &TERNARY[degree],
        4 => &QUATERNARY[degree],
        _ => panic!("only 3 or 4 variables are supported"),
    };
    slot.get_or_init(|| MonomialBasis::build(nvars, degree))
}

/// Number of degree-d monomials in four variables, C(d+3, 3).
pub fn n_quaternary(d: usize) -> usize {
    (d + 1) * (d + 2) * (d + 3) / 6
}

/// Number of degree-d monomials in three variables, C(d+2, 2).
pub fn n_ternary(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

pub fn n_monomials(nvars: usize, d: usize) -> usize {
    match nvars {
        3 => n_ternary(d),
        4 => n_quaternary(d),
        _ => panic!("only 3 or 4 variables are supported"),
    }
}

#[inline]
pub fn add_exp(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// d! / (e0! e1! e2! e3!)
pub fn multinomial(e: &Exponent) -> u64 {
    let fact = |n: u8| (1..=n as u64).product::<u64>();
    let d: u8 = e.iter().sum();
    e.iter().fold(fact(d), |acc, &x| acc / fact(x))
}
