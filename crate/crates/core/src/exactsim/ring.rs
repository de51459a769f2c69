// Copyright contributors to the qhf project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Exact amplitudes `(a0 + a1 w + a2 w^2 + a3 w^3) / sqrt(2)^k` where
//! `w = exp(i pi / 4)`, so `w^4 = -1` and `sqrt(2) = w - w^3`.
//!
//! Coefficients are unbounded integers: every Hadamard increments `k`, and
//! numerators grow with it, so fixed-width arithmetic would silently
//! corrupt exactness on longer circuits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of the ring in canonical form: either `k = 0`, or no further
/// division by `sqrt(2)` is possible (`a0+a2` and `a1+a3` not both even).
/// Zero is always `(0,0,0,0)` with `k = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingAmplitude {
    coeffs: [BigInt; 4],
    k: u32,
}

impl RingAmplitude {
    /// Builds `(a0 + a1 w + a2 w^2 + a3 w^3) / sqrt(2)^k` and normalizes.
    pub fn new(coeffs: [i64; 4], k: u32) -> Self {
        Self::from_bigints(coeffs.map(BigInt::from), k)
    }

    pub fn from_bigints(coeffs: [BigInt; 4], k: u32) -> Self {
        let mut a = RingAmplitude { coeffs, k };
        a.normalize();
        a
    }

    pub fn zero() -> Self {
        RingAmplitude {
            coeffs: [
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
            ],
            k: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::new([v, 0, 0, 0], 0)
    }

    /// The dyadic rational `num / 2^den_log2`.
    pub fn dyadic(num: i64, den_log2: u32) -> Self {
        Self::new([num, 0, 0, 0], 2 * den_log2)
    }

    /// `w^j` for any `j`, with `w^4 = -1` folded into the sign.
    pub fn omega_pow(j: i64) -> Self {
        let j = j.rem_euclid(8) as usize;
        let mut coeffs = [0i64; 4];
        coeffs[j % 4] = if j < 4 { 1 } else { -1 };
        Self::new(coeffs, 0)
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.coeffs
    }

    pub fn sqrt2_exp(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.k == 0
            && self.coeffs[0] == BigInt::from(1)
            && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Applies the reduction rule while both `a0+a2` and `a1+a3` are even
    /// and `k > 0`; the canonical form is unique, so equality is derived.
    fn normalize(&mut self) {
        if self.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            let s02 = &self.coeffs[0] + &self.coeffs[2];
            let s13 = &self.coeffs[1] + &self.coeffs[3];
            if !s02.is_even() || !s13.is_even() {
                break;
            }
            let d13 = &self.coeffs[1] - &self.coeffs[3];
            let d20 = &self.coeffs[2] - &self.coeffs[0];
            self.coeffs = [d13 / 2, s02 / 2, s13 / 2, d20 / 2];
            self.k -= 1;
        }
    }

    /// Multiplies the numerator by `sqrt(2) = w - w^3` (coefficients only;
    /// `k` is untouched).
    fn lift_sqrt2(coeffs: [BigInt; 4]) -> [BigInt; 4] {
        let [a0, a1, a2, a3] = coeffs;
        [&a1 - &a3, &a0 + &a2, &a1 + &a3, &a2 - &a0]
    }

    /// Complex conjugate: `w -> -w^3` maps `(a0,a1,a2,a3)` to `(a0,-a3,-a2,-a1)`.
    pub fn conjugate(&self) -> Self {
        let [a0, a1, a2, a3] = &self.coeffs;
        RingAmplitude {
            coeffs: [a0.clone(), -a3.clone(), -a2.clone(), -a1.clone()],
            k: self.k,
        }
    }

    /// `|x|^2 = x * conj(x)`; real and nonnegative, an element of `Z[sqrt(2)]`
    /// over the same denominators.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conjugate()
    }

    /// Divides by `sqrt(2)` (used by Hadamard application).
    pub fn div_sqrt2(&self) -> Self {
        let mut a = RingAmplitude {
            coeffs: self.coeffs.clone(),
            k: self.k + 1,
        };
        a.normalize();
        a
    }

    /// Numeric value with `w = exp(i pi / 4)`, for rendering and the
    /// floating-point shadow checks.
    pub fn approx(&self) -> (f64, f64) {
        let c: Vec<f64> = self
            .coeffs
            .iter()
            .map(|b| b.to_f64().unwrap_or(f64::NAN))
            .collect();
        let half_sqrt2 = std::f64::consts::SQRT_2 / 2.0;
        let re = c[0] + (c[1] - c[3]) * half_sqrt2;
        let im = c[2] + (c[1] + c[3]) * half_sqrt2;
        let scale = std::f64::consts::SQRT_2.powi(self.k as i32);
        (re / scale, im / scale)
    }
}

impl Default for RingAmplitude {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add<&RingAmplitude> for &RingAmplitude {
    type Output = RingAmplitude;
    fn add(self, rhs: &RingAmplitude) -> RingAmplitude {
        // Align denominators by lifting the smaller-k numerator.
        let k = self.k.max(rhs.k);
        let mut left = self.coeffs.clone();
        for _ in self.k..k {
            left = RingAmplitude::lift_sqrt2(left);
        }
        let mut right = rhs.coeffs.clone();
        for _ in rhs.k..k {
            right = RingAmplitude::lift_sqrt2(right);
        }
        let coeffs = [
            &left[0] + &right[0],
            &left[1] + &right[1],
            &left[2] + &right[2],
            &left[3] + &right[3],
        ];
        RingAmplitude::from_bigints(coeffs, k)
    }
}

impl Sub<&RingAmplitude> for &RingAmplitude {
    type Output = RingAmplitude;
    fn sub(self, rhs: &RingAmplitude) -> RingAmplitude {
        self + &-rhs
    }
}

impl Mul<&RingAmplitude> for &RingAmplitude {
    type Output = RingAmplitude;
    fn mul(self, rhs: &RingAmplitude) -> RingAmplitude {
        let mut coeffs = [
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        for i in 0..4 {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let term = &self.coeffs[i] * &rhs.coeffs[j];
                if i + j < 4 {
                    coeffs[i + j] += term;
                } else {
                    coeffs[i + j - 4] -= term;
                }
            }
        }
        RingAmplitude::from_bigints(coeffs, self.k + rhs.k)
    }
}

impl Neg for &RingAmplitude {
    type Output = RingAmplitude;
    fn neg(self) -> RingAmplitude {
        RingAmplitude {
            coeffs: [
                -self.coeffs[0].clone(),
                -self.coeffs[1].clone(),
                -self.coeffs[2].clone(),
                -self.coeffs[3].clone(),
            ],
            k: self.k,
        }
    }
}

impl Neg for RingAmplitude {
    type Output = RingAmplitude;
    fn neg(self) -> RingAmplitude {
        -&self
    }
}

impl Add for RingAmplitude {
    type Output = RingAmplitude;
    fn add(self, rhs: RingAmplitude) -> RingAmplitude {
        &self + &rhs
    }
}

impl Sub for RingAmplitude {
    type Output = RingAmplitude;
    fn sub(self, rhs: RingAmplitude) -> RingAmplitude {
        &self - &rhs
    }
}

impl Mul for RingAmplitude {
    type Output = RingAmplitude;
    fn mul(self, rhs: RingAmplitude) -> RingAmplitude {
        &self * &rhs
    }
}

impl fmt::Display for RingAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})/sqrt2^{}",
            self.coeffs[0], self.coeffs[1], self.coeffs[2], self.coeffs[3], self.k
        )
    }
}

impl Serialize for RingAmplitude {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RingAmplitude", 3)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        s.serialize_field("coeffs", &coeffs)?;
        s.serialize_field("sqrt2_exp", &self.k)?;
        let (re, im) = self.approx();
        s.serialize_field("approx", &[re, im])?;
        s.end()
    }
}
