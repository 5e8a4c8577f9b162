//! GF(2^4) arithmetic with primitive polynomial x^4 + x + 1 (0x13).

use crate::{Error, Result};

pub const PRIMITIVE_POLY: u8 = 0x13;
/// Multiplicative group order.
pub const ORDER: usize = 15;

const fn build_exp() -> [u8; 2 * ORDER] {
    let mut exp = [0u8; 2 * ORDER];
    let mut x: u8 = 1;
    let mut i = 0;
    while i < 2 * ORDER {
        exp[i] = x;
        x <<= 1;
        if x & 0x10 != 0 {
            x ^= PRIMITIVE_POLY;
        }
        i += 1;
    }
    exp
}

const fn build_log(exp: &[u8; 2 * ORDER]) -> [u8; 16] {
    let mut log = [0u8; 16];
    let mut i = 0;
    while i < ORDER {
        log[exp[i] as usize] = i as u8;
        i += 1;
    }
    log
}

/// `EXP[i] = α^i`, doubled so sums of two logs index directly.
pub const EXP: [u8; 2 * ORDER] = build_exp();
/// `LOG[α^i] = i`; `LOG[0]` is unused.
pub const LOG: [u8; 16] = build_log(&EXP);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gf16Op {
    Add,
    Mul,
    Inv,
}

/// Single entry point over the three field operations; `b` is ignored by `Inv`.
pub fn gf16_arithmetic(a: u8, b: u8, op: Gf16Op) -> Result<u8> {
    if a > 15 || b > 15 {
        return Err(Error::Domain(format!("GF(16) symbols must be < 16, got {a}, {b}")));
    }
    match op {
        Gf16Op::Add => Ok(add(a, b)),
        Gf16Op::Mul => Ok(mul(a, b)),
        Gf16Op::Inv => inv(a).ok_or_else(|| Error::Domain("inverse of zero in GF(16)".into())),
    }
}

#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    a ^ b
}

#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        0
    } else {
        EXP[LOG[a as usize] as usize + LOG[b as usize] as usize]
    }
}

#[inline]
pub fn inv(a: u8) -> Option<u8> {
    (a != 0).then(|| EXP[(ORDER - LOG[a as usize] as usize) % ORDER])
}

#[inline]
pub fn div(a: u8, b: u8) -> Option<u8> {
    inv(b).map(|ib| mul(a, ib))
}

/// `α^e` for any integer exponent.
#[inline]
pub fn alpha_pow(e: i64) -> u8 {
    EXP[e.rem_euclid(ORDER as i64) as usize]
}

/// Evaluates a polynomial given highest-degree coefficient first (Horner).
pub fn poly_eval(coeffs: &[u8], x: u8) -> u8 {
    coeffs.iter().fold(0, |acc, &c| mul(acc, x) ^ c)
}
