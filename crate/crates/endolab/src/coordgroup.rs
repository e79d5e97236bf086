//! The coordinate backend: `G(p, r, t, T)` realized on triples of residues
//! mod `p^{r+t}` with the explicit classified binary operation.
//!
//! Designated generators are `a = (1,0,0)`, `b = (0,1,0)`, `c = (0,0,1)`;
//! the triple `(i,j,k)` denotes `a^i b^j c^k`. Elements with all
//! coordinates divisible by `p^r` multiply coordinate-wise, which is what
//! makes the cross-term law associative for `t <= r`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{ElemId, FiniteGroup};
use crate::modmat::Mat3;

/// Construction refuses groups larger than this (2^24 elements).
pub const SIZE_CAP: usize = 1 << 24;

/// Exhaustive associativity validation is used up to this order (3^6);
/// larger instances validate on seeded random triples.
pub const ASSOC_EXHAUSTIVE_MAX: usize = 729;

/// Sample count for the non-exhaustive associativity validation.
pub const ASSOC_FULL_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoordError {
    #[error("t must satisfy 1 <= t <= r (got r = {r}, t = {t})")]
    BadExponents { r: u32, t: u32 },
    #[error("T must be a matrix mod p^t = {expected}, got modulus {got}")]
    WrongTModulus { expected: u64, got: u64 },
    #[error("T is not invertible mod {0}")]
    TNotInvertible(u64),
    #[error("p = 2 with t = r is outside the coordinate model; build this instance from its presentation instead")]
    ExcludedCase,
    #[error("group order {order} exceeds the construction cap {cap}")]
    SizeCapExceeded { order: u128, cap: usize },
    #[error("self-validation failed: {law} violated at {witness}")]
    SelfValidation { law: &'static str, witness: String },
    #[error(transparent)]
    Mat(#[from] crate::modmat::MatError),
}

/// The defining tuple `(p, r, t, T)` of a classified group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams {
    pub p: u64,
    pub r: u32,
    pub t: u32,
    pub t_mat: Mat3,
}

impl GroupParams {
    pub fn new(p: u64, r: u32, t: u32, t_mat: Mat3) -> Result<Self, CoordError> {
        let params = GroupParams { p, r, t, t_mat };
        params.validate_base()?;
        Ok(params)
    }

    /// Checks shared by the coordinate model and the presentation catalog:
    /// exponent ranges and invertibility of `T` mod `p^t`.
    pub fn validate_base(&self) -> Result<(), CoordError> {
        if self.t == 0 || self.t > self.r {
            return Err(CoordError::BadExponents { r: self.r, t: self.t });
        }
        let expected = crate::modmat::Modulus::new(self.p, self.t)?;
        if self.t_mat.modulus() != expected {
            return Err(CoordError::WrongTModulus {
                expected: expected.value(),
                got: self.t_mat.modulus().value(),
            });
        }
        if !self.t_mat.is_unit() {
            return Err(CoordError::TNotInvertible(expected.value()));
        }
        Ok(())
    }

    /// Additional constraints of the coordinate model: the excluded
    /// `p = 2, t = r` case and the size cap.
    pub fn validate_coordinate(&self) -> Result<(), CoordError> {
        self.validate_base()?;
        if self.p == 2 && self.t == self.r {
            return Err(CoordError::ExcludedCase);
        }
        let order = (self.p as u128).pow(3 * (self.r + self.t));
        if order > SIZE_CAP as u128 {
            return Err(CoordError::SizeCapExceeded { order, cap: SIZE_CAP });
        }
        Ok(())
    }

    /// `p^{3(r+t)}`.
    pub fn expected_order(&self) -> u128 {
        (self.p as u128).pow(3 * (self.r + self.t))
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{},[{}])", self.p, self.r, self.t, self.t_mat.row_string())
    }
}

/// A group element in coordinate form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordElement(pub u64, pub u64, pub u64);

impl fmt::Display for CoordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0, self.1, self.2)
    }
}

/// How thoroughly construction self-validates the group laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationLevel {
    /// Identity and inverses exhaustive; associativity exhaustive up to
    /// [`ASSOC_EXHAUSTIVE_MAX`] elements, else on 10^6 seeded triples.
    Full { seed: u64 },
    /// Identity and inverses exhaustive; associativity on the given number
    /// of seeded triples. Meant for wide sweeps where each instance is
    /// additionally exercised by the structural suite.
    Quick { seed: u64, assoc_samples: u64 },
}

pub struct CoordGroup {
    params: GroupParams,
    /// `p^{r+t}`, the coordinate modulus.
    m: u64,
    /// `q * t[row][col] mod m` with `q = p^r`.
    qt: [[u64; 3]; 3],
    order: usize,
}

impl CoordGroup {
    /// Builds and self-validates the group. Identity and inverse laws are
    /// checked exhaustively at every level; the associativity check depth
    /// depends on `level`.
    pub fn make(params: GroupParams, level: ValidationLevel) -> Result<Self, CoordError> {
        params.validate_coordinate()?;
        let m = params.p.pow(params.r + params.t);
        let q = params.p.pow(params.r);
        let mut qt = [[0u64; 3]; 3];
        for (row, qt_row) in qt.iter_mut().enumerate() {
            for (col, slot) in qt_row.iter_mut().enumerate() {
                *slot = (q * params.t_mat.entry(row, col)) % m;
            }
        }
        let order = (m as u128).pow(3) as usize;
        let g = CoordGroup { params, m, qt, order };
        g.self_validate(level)?;
        Ok(g)
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn coordinate_modulus(&self) -> u64 {
        self.m
    }

    pub fn descriptor(&self) -> String {
        self.params.to_string()
    }

    pub fn identity_el(&self) -> CoordElement {
        CoordElement(0, 0, 0)
    }

    pub fn gen_a(&self) -> CoordElement {
        CoordElement(1, 0, 0)
    }

    pub fn gen_b(&self) -> CoordElement {
        CoordElement(0, 1, 0)
    }

    pub fn gen_c(&self) -> CoordElement {
        CoordElement(0, 0, 1)
    }

    #[inline]
    fn cross(&self, u: &CoordElement, v: &CoordElement, col: usize) -> u64 {
        // i'j t_{1,col} + i'k t_{2,col} + j'k t_{3,col}, all times p^r.
        let c1 = v.0 * u.1 % self.m;
        let c2 = v.0 * u.2 % self.m;
        let c3 = v.1 * u.2 % self.m;
        (c1 * self.qt[0][col] + c2 * self.qt[1][col] + c3 * self.qt[2][col]) % self.m
    }

    #[inline]
    pub fn mul_el(&self, u: CoordElement, v: CoordElement) -> CoordElement {
        let m = self.m;
        let i = (u.0 + v.0 + m - self.cross(&u, &v, 0)) % m;
        let j = (u.1 + v.1 + m - self.cross(&u, &v, 1)) % m;
        let k = (u.2 + v.2 + m - self.cross(&u, &v, 2)) % m;
        CoordElement(i, j, k)
    }

    /// `g^{-1} = -g - p^r B(g, g)` coordinate-wise; validated exhaustively
    /// at construction.
    #[inline]
    pub fn inv_el(&self, u: CoordElement) -> CoordElement {
        let m = self.m;
        let i = (2 * m - u.0 - self.cross(&u, &u, 0)) % m;
        let j = (2 * m - u.1 - self.cross(&u, &u, 1)) % m;
        let k = (2 * m - u.2 - self.cross(&u, &u, 2)) % m;
        CoordElement(i, j, k)
    }

    pub fn pow_el(&self, u: CoordElement, n: i64) -> CoordElement {
        let (mut base, mut e) =
            if n < 0 { (self.inv_el(u), n.unsigned_abs()) } else { (u, n as u64) };
        let mut acc = self.identity_el();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_el(acc, base);
            }
            base = self.mul_el(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn commutator_el(&self, u: CoordElement, v: CoordElement) -> CoordElement {
        let t = self.mul_el(self.inv_el(u), self.inv_el(v));
        self.mul_el(self.mul_el(t, u), v)
    }

    /// Order of an element: the least power of p killing it.
    pub fn element_order_el(&self, u: CoordElement) -> u64 {
        let mut x = u;
        let mut o = 1u64;
        while x != self.identity_el() {
            x = self.pow_el(x, self.params.p as i64);
            o *= self.params.p;
        }
        o
    }

    pub fn encode(&self, u: CoordElement) -> ElemId {
        ((u.0 * self.m + u.1) * self.m + u.2) as ElemId
    }

    pub fn decode(&self, id: ElemId) -> CoordElement {
        let id = id as u64;
        CoordElement(id / (self.m * self.m), id / self.m % self.m, id % self.m)
    }

    fn random_el(&self, rng: &mut ChaCha8Rng) -> CoordElement {
        CoordElement(
            rng.gen_range(0..self.m),
            rng.gen_range(0..self.m),
            rng.gen_range(0..self.m),
        )
    }

    fn self_validate(&self, level: ValidationLevel) -> Result<(), CoordError> {
        let e = self.identity_el();
        for id in 0..self.order as ElemId {
            let g = self.decode(id);
            if self.mul_el(g, e) != g || self.mul_el(e, g) != g {
                return Err(CoordError::SelfValidation {
                    law: "identity",
                    witness: g.to_string(),
                });
            }
            let inv = self.inv_el(g);
            if self.mul_el(g, inv) != e || self.mul_el(inv, g) != e {
                return Err(CoordError::SelfValidation {
                    law: "inverse",
                    witness: g.to_string(),
                });
            }
        }
        match level {
            ValidationLevel::Full { seed } => {
                if self.order <= ASSOC_EXHAUSTIVE_MAX {
                    self.check_assoc_exhaustive()?;
                } else {
                    self.check_assoc_sampled(seed, ASSOC_FULL_SAMPLES)?;
                }
            }
            ValidationLevel::Quick { seed, assoc_samples } => {
                self.check_assoc_sampled(seed, assoc_samples)?;
            }
        }
        Ok(())
    }

    fn check_assoc_exhaustive(&self) -> Result<(), CoordError> {
        // Materialize the n^2 product table once so the n^3 sweep is pure
        // lookups; at the 729 cap that is 2 MB and a few hundred million
        // probes.
        let n = self.order;
        let mut table = vec![0 as ElemId; n * n];
        for x in 0..n {
            let gx = self.decode(x as ElemId);
            for y in 0..n {
                table[x * n + y] = self.encode(self.mul_el(gx, self.decode(y as ElemId)));
            }
        }
        for x in 0..n {
            let row_x = &table[x * n..(x + 1) * n];
            for y in 0..n {
                let xy = row_x[y] as usize;
                let row_xy = &table[xy * n..(xy + 1) * n];
                let row_y = &table[y * n..(y + 1) * n];
                for z in 0..n {
                    if row_xy[z] != row_x[row_y[z] as usize] {
                        return Err(CoordError::SelfValidation {
                            law: "associativity",
                            witness: format!(
                                "{} {} {}",
                                self.decode(x as ElemId),
                                self.decode(y as ElemId),
                                self.decode(z as ElemId)
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_assoc_sampled(&self, seed: u64, samples: u64) -> Result<(), CoordError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = self.random_el(&mut rng);
            let y = self.random_el(&mut rng);
            let z = self.random_el(&mut rng);
            if self.mul_el(self.mul_el(x, y), z) != self.mul_el(x, self.mul_el(y, z)) {
                return Err(CoordError::SelfValidation {
                    law: "associativity",
                    witness: format!("{x} {y} {z}"),
                });
            }
        }
        Ok(())
    }

    /// True iff all coordinates are divisible by `p^t`; on the classified
    /// instances this set is exactly the center, but callers relying on
    /// that must verify against [`crate::group::center`].
    pub fn coords_div_pt(&self, u: CoordElement) -> bool {
        let pt = self.params.p.pow(self.params.t);
        u.0 % pt == 0 && u.1 % pt == 0 && u.2 % pt == 0
    }
}

impl FiniteGroup for CoordGroup {
    fn order(&self) -> usize {
        self.order
    }

    fn identity(&self) -> ElemId {
        0
    }

    fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.encode(self.mul_el(self.decode(a), self.decode(b)))
    }

    fn inv(&self, a: ElemId) -> ElemId {
        self.encode(self.inv_el(self.decode(a)))
    }

    fn generators(&self) -> Vec<ElemId> {
        vec![self.encode(self.gen_a()), self.encode(self.gen_b()), self.encode(self.gen_c())]
    }

    fn element_label(&self, a: ElemId) -> String {
        self.decode(a).to_string()
    }
}
