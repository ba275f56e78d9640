//! 3×3 matrices over `Z[ζ]` that are unitary for the Hermitian form
//!
//! ```text
//!     ⎛ −r−1   1    0 ⎞
//! F = ⎜   1   1−r   0 ⎟
//!     ⎝   0    0    1 ⎠
//! ```
//!
//! taken modulo the scalar group `Z = {ζ^ν I}`, together with the named
//! matrices `u`, `v`, `b`, `j`, `γ₀`, `a₁`, `a₂`, `a₃`.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::OnceLock;

use serde::Serialize;

use crate::cyclotomic::{CycInt, QuadInt};
use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

/// A raw 3×3 matrix over `Z[ζ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mat3(pub [[CycInt; 3]; 3]);

impl Mat3 {
    pub fn from_i64s(e: [[[i64; 4]; 3]; 3]) -> Self {
        Mat3(e.map(|row| row.map(CycInt::from_i64s)))
    }

    pub fn identity() -> Self {
        Mat3::scalar(CycInt::one())
    }

    pub fn scalar(s: CycInt) -> Self {
        let mut m = Mat3::default();
        for i in 0..3 {
            m.0[i][i] = s.clone();
        }
        m
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycInt {
        &self.0[i][j]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat3 {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i].conj())
        }))
    }

    pub fn mul_zeta(&self) -> Mat3 {
        Mat3(self.0.clone().map(|row| row.map(|x| x.mul_zeta())))
    }

    /// `ζ^k · self`.
    pub fn scaled_by_zeta_pow(&self, k: i64) -> Mat3 {
        let mut m = self.clone();
        for _ in 0..k.rem_euclid(12) {
            m = m.mul_zeta();
        }
        m
    }

    pub fn det(&self) -> CycInt {
        let m = &self.0;
        let minor = |a: usize, b: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
        let t0 = &m[0][0] * &minor(1, 2);
        let t1 = &m[0][1] * &minor(0, 2);
        let t2 = &m[0][2] * &minor(0, 1);
        &(&t0 - &t1) + &t2
    }

    /// Adjugate (transpose of the cofactor matrix).
    pub fn adjugate(&self) -> Mat3 {
        let m = &self.0;
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let rows: Vec<usize> = (0..3).filter(|&x| x != j).collect();
                let cols: Vec<usize> = (0..3).filter(|&y| y != i).collect();
                let c = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]])
                    - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
                if (i + j) % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
        }))
    }

    /// If `self = ζ^k I`, return `k`.
    pub fn scalar_exponent(&self) -> Option<u32> {
        for i in 0..3 {
            for j in 0..3 {
                if i != j && !self.0[i][j].is_zero() {
                    return None;
                }
            }
        }
        if self.0[0][0] != self.0[1][1] || self.0[1][1] != self.0[2][2] {
            return None;
        }
        self.0[0][0].root_of_unity_exponent()
    }

    pub fn is_unitary(&self) -> bool {
        let f = hermitian_form();
        &(&self.adjoint() * f) * self == *f
    }

    /// `F⁻¹ g* F`, the inverse of a unitary matrix.
    pub fn unitary_inverse(&self) -> Mat3 {
        &(form_inverse() * &self.adjoint()) * hermitian_form()
    }

    pub fn to_i64s(&self) -> Option<[[[i64; 4]; 3]; 3]> {
        use num_traits::ToPrimitive;
        let mut out = [[[0i64; 4]; 3]; 3];
        for (row, src) in out.iter_mut().zip(&self.0) {
            for (e, x) in row.iter_mut().zip(src) {
                for (o, c) in e.iter_mut().zip(&x.c) {
                    *o = c.to_i64()?;
                }
            }
        }
        Some(out)
    }
}

impl Mul for &Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: &Mat3) -> Mat3 {
        let a = &self.0;
        let b = &rhs.0;
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = CycInt::zero();
                for k in 0..3 {
                    if !a[i][k].is_zero() && !b[k][j].is_zero() {
                        acc += &(&a[i][k] * &b[k][j]);
                    }
                }
                acc
            })
        }))
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        &self * &rhs
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "({x})")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// The form `F`.
pub fn hermitian_form() -> &'static Mat3 {
    static F: OnceLock<Mat3> = OnceLock::new();
    F.get_or_init(|| {
        Mat3::from_i64s([
            [[-1, -2, 0, 1], [1, 0, 0, 0], [0, 0, 0, 0]],
            [[1, 0, 0, 0], [1, -2, 0, 1], [0, 0, 0, 0]],
            [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
        ])
    })
}

/// `F⁻¹`, integral because `det F = 1`.
pub fn form_inverse() -> &'static Mat3 {
    static FI: OnceLock<Mat3> = OnceLock::new();
    FI.get_or_init(|| {
        let f = hermitian_form();
        assert_eq!(f.det(), CycInt::one(), "det F must be 1");
        f.adjugate()
    })
}

/// Class of `det g` modulo `⟨ζ³⟩`: the exponent `ν mod 3` where `det g = ζ^ν`.
/// Rescaling `g` by `ζ^k` multiplies the determinant by `ζ^{3k}`, so the class
/// is well defined on `gZ`. Trivial class means `gZ ∈ Γ₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DetClass(pub u8);

impl DetClass {
    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }
}

impl Mul for DetClass {
    type Output = DetClass;
    fn mul(self, rhs: DetClass) -> DetClass {
        DetClass((self.0 + rhs.0) % 3)
    }
}

/// An element `gZ` of `Γ`, stored as the canonical representative: the
/// lexicographically least of the twelve matrices `ζ^ν g`.
#[derive(Clone, Debug)]
pub struct ProjUnitary {
    m: Mat3,
    key: u64,
}

impl ProjUnitary {
    /// Canonicalize a matrix, checking unitarity for `F`.
    pub fn canonical(m: Mat3) -> Result<ProjUnitary> {
        if !m.is_unitary() {
            return Err(Error::NotUnitary);
        }
        Ok(ProjUnitary::from_unitary(m))
    }

    /// Canonicalize a matrix already known to be unitary (e.g. a product of
    /// unitary matrices).
    pub fn from_unitary(m: Mat3) -> ProjUnitary {
        let mut best = m.clone();
        let mut cur = m;
        for _ in 1..12 {
            cur = cur.mul_zeta();
            if cur < best {
                best = cur.clone();
            }
        }
        let mut h = DefaultHasher::new();
        best.hash(&mut h);
        ProjUnitary {
            m: best,
            key: h.finish(),
        }
    }

    pub fn identity() -> ProjUnitary {
        ProjUnitary::from_unitary(Mat3::identity())
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    /// 64-bit hash key of the canonical form.
    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn inv(&self) -> ProjUnitary {
        ProjUnitary::from_unitary(self.m.unitary_inverse())
    }

    pub fn pow(&self, n: i64) -> ProjUnitary {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut acc = Mat3::identity();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base.m;
        }
        ProjUnitary::from_unitary(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.m.scalar_exponent().is_some()
    }

    /// `|g₃₃|² = cosh²(d(0, g.0))`.
    pub fn entry33_abs2(&self) -> QuadInt {
        self.m.0[2][2].abs2()
    }

    pub fn det_class(&self) -> DetClass {
        let d = self.m.det();
        let nu = d
            .root_of_unity_exponent()
            .expect("determinant of a unitary matrix over Z[zeta] is a root of unity");
        DetClass((nu % 3) as u8)
    }

    /// Whether `g.0 = 0`, i.e. the third row and column vanish off the corner.
    pub fn fixes_origin(&self) -> bool {
        let m = &self.m.0;
        m[0][2].is_zero() && m[1][2].is_zero() && m[2][0].is_zero() && m[2][1].is_zero()
    }

    /// Order of the class, searching up to `limit`.
    pub fn order(&self, limit: u32) -> Option<u32> {
        let mut acc = self.m.clone();
        for n in 1..=limit {
            if acc.scalar_exponent().is_some() {
                return Some(n);
            }
            acc = &acc * &self.m;
        }
        None
    }
}

impl PartialEq for ProjUnitary {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.m == other.m
    }
}

impl Eq for ProjUnitary {}

impl Hash for ProjUnitary {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.key);
    }
}

impl PartialOrd for ProjUnitary {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjUnitary {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.m.cmp(&other.m)
    }
}

impl Mul for &ProjUnitary {
    type Output = ProjUnitary;
    fn mul(self, rhs: &ProjUnitary) -> ProjUnitary {
        ProjUnitary::from_unitary(&self.m * &rhs.m)
    }
}

impl Mul for ProjUnitary {
    type Output = ProjUnitary;
    fn mul(self, rhs: ProjUnitary) -> ProjUnitary {
        &self * &rhs
    }
}

/// Generator letters of the standard alphabet.
pub mod letter {
    pub const U: u16 = 0;
    pub const V: u16 = 1;
    pub const B: u16 = 2;
    pub const J: u16 = 3;
    pub const A1: u16 = 4;
    pub const A2: u16 = 5;
    pub const A3: u16 = 6;
}

/// Alphabet `u, v, b, j, a1, a2, a3`.
pub fn gamma_alphabet() -> &'static Alphabet {
    static A: OnceLock<Alphabet> = OnceLock::new();
    A.get_or_init(|| Alphabet::new(["u", "v", "b", "j", "a1", "a2", "a3"]))
}

pub const A1_WORD: &str = "v u v^-1 j^4 b u v j^2";
pub const A2_WORD: &str = "v^2 u b u v^-1 u v^2 j";
pub const A3_WORD: &str = "u^-1 v^2 u j^9 b v^-1 u v^-1 j^8";

/// The named matrices, as exact raw representatives.
#[derive(Debug)]
pub struct Constants {
    /// Raw matrices indexed by the letters of [`gamma_alphabet`].
    raw: Vec<Mat3>,
    raw_inv: Vec<Mat3>,
    classes: Vec<ProjUnitary>,
    pub gamma0: Mat3,
}

impl Constants {
    /// Build and validate every named matrix.
    pub fn build() -> Result<Constants> {
        let u = Mat3::from_i64s([
            [[0, -1, 1, 1], [1, -1, 0, 0], [0, 0, 0, 0]],
            [[-1, 0, 1, 1], [0, 1, 0, -1], [0, 0, 0, 0]],
            [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
        ]);
        let v = Mat3::from_i64s([
            [[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]],
            [[-1, -1, 1, 1], [1, 0, 0, 0], [0, 0, 0, 0]],
            [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
        ]);
        let b = Mat3::from_i64s([
            [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
            [[2, 2, -1, -2], [-1, -1, 1, 1], [0, 0, -1, -1]],
            [[0, 1, 1, 0], [-1, 0, 0, -1], [1, 1, 0, -1]],
        ]);
        let gamma0 = Mat3::from_i64s([
            [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
            [[1, 0, 0, 0], [1, -2, 0, 1], [0, 0, 0, 0]],
            [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
        ]);
        for m in [&u, &v, &b] {
            if !m.is_unitary() {
                return Err(Error::NotUnitary);
            }
        }
        let uv = &u * &v;
        let j = &uv * &uv;
        let mut c = Constants {
            raw: vec![u, v, b, j],
            raw_inv: Vec::new(),
            classes: Vec::new(),
            gamma0,
        };
        c.raw_inv = c.raw.iter().map(Mat3::unitary_inverse).collect();
        for w in [A1_WORD, A2_WORD, A3_WORD] {
            let word = gamma_alphabet().parse(w)?;
            let m = c.eval_raw(&word);
            if !m.is_unitary() {
                return Err(Error::NotUnitary);
            }
            c.raw_inv.push(m.unitary_inverse());
            c.raw.push(m);
        }
        c.classes = c
            .raw
            .iter()
            .cloned()
            .map(ProjUnitary::from_unitary)
            .collect();
        Ok(c)
    }

    /// Shared instance; panics if validation fails.
    pub fn get() -> &'static Constants {
        static C: OnceLock<Constants> = OnceLock::new();
        C.get_or_init(|| Constants::build().expect("named matrices must be unitary for F"))
    }

    pub fn raw(&self, letter: u16) -> &Mat3 {
        &self.raw[letter as usize]
    }

    pub fn class(&self, letter: u16) -> &ProjUnitary {
        &self.classes[letter as usize]
    }

    pub fn u(&self) -> &ProjUnitary {
        self.class(letter::U)
    }
    pub fn v(&self) -> &ProjUnitary {
        self.class(letter::V)
    }
    pub fn b(&self) -> &ProjUnitary {
        self.class(letter::B)
    }
    pub fn j(&self) -> &ProjUnitary {
        self.class(letter::J)
    }

    /// Exact product of raw representatives; inverse letters use `F⁻¹g*F`.
    pub fn eval_raw(&self, w: &Word) -> Mat3 {
        let mut acc = Mat3::identity();
        for &(g, e) in w.letters() {
            let m = if e < 0 {
                &self.raw_inv[g as usize]
            } else {
                &self.raw[g as usize]
            };
            for _ in 0..e.unsigned_abs() {
                acc = &acc * m;
            }
        }
        acc
    }

    pub fn eval(&self, w: &Word) -> ProjUnitary {
        ProjUnitary::from_unitary(self.eval_raw(w))
    }

    /// Parse and evaluate a word in the standard alphabet.
    pub fn word(&self, text: &str) -> Result<ProjUnitary> {
        Ok(self.eval(&gamma_alphabet().parse(text)?))
    }

    pub fn word_raw(&self, text: &str) -> Result<Mat3> {
        Ok(self.eval_raw(&gamma_alphabet().parse(text)?))
    }

    /// `γ₂ = b`.
    pub fn gamma2(&self) -> ProjUnitary {
        self.b().clone()
    }

    /// `γ₃ = b u⁻¹ b`.
    pub fn gamma3(&self) -> ProjUnitary {
        self.word("b u^-1 b").expect("static word")
    }

    /// `γ₄ = b u⁻¹ v⁻¹ u⁻¹ b`.
    pub fn gamma4(&self) -> ProjUnitary {
        self.word("b u^-1 v^-1 u^-1 b").expect("static word")
    }
}

/// Whether `lhs = ζ^k · rhs` as exact matrices.
pub fn equal_up_to_zeta(lhs: &Mat3, rhs: &Mat3, k: i64) -> bool {
    *lhs == rhs.scaled_by_zeta_pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> &'static Constants {
        Constants::get()
    }

    #[test]
    fn generators_are_unitary() {
        for l in 0..7 {
            assert!(c().raw(l).is_unitary(), "letter {l}");
        }
        assert_eq!(*hermitian_form(), hermitian_form().adjoint());
        assert_eq!(form_inverse() * hermitian_form(), Mat3::identity());
    }

    #[test]
    fn u_cubed_and_v_fourth_are_identity_matrices() {
        assert_eq!(c().word_raw("u^3").unwrap(), Mat3::identity());
        assert_eq!(c().word_raw("v^4").unwrap(), Mat3::identity());
    }

    #[test]
    fn uv_squared_equals_vu_squared() {
        assert_eq!(
            c().word_raw("(uv)^2").unwrap(),
            c().word_raw("(vu)^2").unwrap()
        );
    }

    #[test]
    fn j_is_diag_zeta_zeta_one() {
        let z = CycInt::zeta();
        let mut d = Mat3::identity();
        d.0[0][0] = z.clone();
        d.0[1][1] = z;
        assert_eq!(*c().raw(letter::J), d);
    }

    #[test]
    fn buvu_squared_v_is_zeta_inverse() {
        let m = c().word_raw("(buvu)^2 v").unwrap();
        assert_eq!(m.scalar_exponent(), Some(11));
    }

    #[test]
    fn group_laws() {
        let b = c().b();
        assert_eq!(b * &ProjUnitary::identity(), *b);
        assert!((b * &b.inv()).is_identity());
        assert!(c().v().pow(4).is_identity());
        assert_eq!(
            &c().raw(letter::B).unitary_inverse() * c().raw(letter::B),
            Mat3::identity()
        );
    }

    #[test]
    fn canonical_is_scalar_invariant() {
        let b = c().raw(letter::B).clone();
        let a = ProjUnitary::canonical(b.scaled_by_zeta_pow(5)).unwrap();
        assert_eq!(a, *c().b());
        let again = ProjUnitary::canonical(a.matrix().clone()).unwrap();
        assert_eq!(again.matrix(), a.matrix());
        assert_eq!(
            ProjUnitary::canonical(Mat3::identity()).unwrap(),
            ProjUnitary::identity()
        );
        assert!(c().b().pow(3).is_identity());
        assert_eq!(c().b().pow(3), ProjUnitary::identity());
    }

    #[test]
    fn canonical_rejects_non_unitary() {
        let mut m = Mat3::identity();
        m.0[0][1] = CycInt::one();
        assert!(matches!(ProjUnitary::canonical(m), Err(Error::NotUnitary)));
    }

    #[test]
    fn entry33_examples() {
        assert_eq!(ProjUnitary::identity().entry33_abs2(), QuadInt::from_int(1));
        assert_eq!(c().b().entry33_abs2(), QuadInt::new(2, 1));
        assert_eq!(c().gamma3().entry33_abs2(), QuadInt::new(4, 2));
        assert_eq!(c().gamma4().entry33_abs2(), QuadInt::new(6, 3));
    }

    #[test]
    fn det_classes_of_pi_generators() {
        let d = |l| c().raw(l).det().root_of_unity_exponent();
        assert_eq!(d(letter::A1), Some(3));
        assert_eq!(d(letter::A2), Some(3));
        assert_eq!(d(letter::A3), Some(6));
        for l in [letter::A1, letter::A2, letter::A3] {
            assert!(c().class(l).det_class().is_trivial());
        }
        assert!(ProjUnitary::identity().det_class().is_trivial());
    }
}
