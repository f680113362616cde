//! The icosian ring: quaternions whose components are half-integer
//! combinations over Z[tau]. The 120 unit icosians form a 2-fold cover
//! of the icosahedral group; their Z[tau]-span is the icosian ring,
//! which embeds as an E8 lattice via x -> (x, x*).

use super::golden::{GoldenInt, GoldenRational};
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

/// A quaternion with components num[i]/2, num[i] in Z[tau].
///
/// The generating 120-element set needs halves and products stay in
/// this form, so the denominator is fixed at 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IcosianQuaternion {
    /// numerators of (w, x, y, z) over the fixed denominator 2
    pub num: [GoldenInt; 4],
}

impl IcosianQuaternion {
    /// Build from doubled components: q = (w + x i + y j + z k)/2.
    pub fn from_doubled(num: [GoldenInt; 4]) -> Self {
        IcosianQuaternion { num }
    }

    /// Build from whole components.
    pub fn from_components(c: [GoldenInt; 4]) -> Self {
        IcosianQuaternion {
            num: c.map(|v| GoldenInt { a: 2 * &v.a, b: 2 * &v.b }),
        }
    }

    pub fn zero() -> Self {
        Self::from_components([
            GoldenInt::zero(),
            GoldenInt::zero(),
            GoldenInt::zero(),
            GoldenInt::zero(),
        ])
    }

    pub fn one() -> Self {
        let mut q = Self::zero();
        q.num[0] = GoldenInt::new(2, 0);
        q
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// Components as exact golden rationals.
    pub fn components(&self) -> [GoldenRational; 4] {
        self.num
            .clone()
            .map(|n| GoldenRational::new(n, BigInt::from(2)))
    }

    /// Real 4-vector of component values.
    pub fn values(&self) -> [f64; 4] {
        self.num.clone().map(|n| n.value() / 2.0)
    }

    /// Componentwise Galois conjugation (the star map of the icosian
    /// cut and project scheme).
    pub fn star(&self) -> Self {
        IcosianQuaternion { num: self.num.clone().map(|c| c.conjugate()) }
    }

    /// Quaternion conjugate (w, -x, -y, -z).
    pub fn quaternion_conjugate(&self) -> Self {
        let [w, x, y, z] = self.num.clone();
        IcosianQuaternion { num: [w, -x, -y, -z] }
    }

    /// N(q) = w^2 + x^2 + y^2 + z^2, an exact golden rational.
    pub fn norm(&self) -> GoldenRational {
        let mut s = GoldenInt::zero();
        for c in &self.num {
            s = s + c * c;
        }
        GoldenRational::new(s, BigInt::from(4))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut num = self.num.clone();
        for (a, b) in num.iter_mut().zip(&rhs.num) {
            *a = a.clone() + b.clone();
        }
        IcosianQuaternion { num }
    }

    pub fn neg(&self) -> Self {
        IcosianQuaternion { num: self.num.clone().map(|c| -c) }
    }

    /// Exact quaternion product. Numerators multiply to denominator 4;
    /// inside the icosian ring the result is again half-integral.
    pub fn multiply(&self, rhs: &Self) -> Self {
        let [w1, x1, y1, z1] = &self.num;
        let [w2, x2, y2, z2] = &rhs.num;
        let w = w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2;
        let x = w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2;
        let y = w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2;
        let z = w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2;
        IcosianQuaternion { num: [w, x, y, z].map(halve) }
    }

    /// Integer coordinates (a_w, b_w, a_x, b_x, ...) of the doubled
    /// quaternion: 8 integers identifying q inside (1/2)Z[tau]^4.
    pub fn doubled_coords(&self) -> [BigInt; 8] {
        let mut out: [BigInt; 8] = Default::default();
        for (i, c) in self.num.iter().enumerate() {
            out[2 * i] = c.a.clone();
            out[2 * i + 1] = c.b.clone();
        }
        out
    }
}

fn halve(x: GoldenInt) -> GoldenInt {
    let (qa, ra) = num_integer::Integer::div_rem(&x.a, &BigInt::from(2));
    let (qb, rb) = num_integer::Integer::div_rem(&x.b, &BigInt::from(2));
    assert!(ra.is_zero() && rb.is_zero(), "product left the half-integer form");
    GoldenInt { a: qa, b: qb }
}

impl fmt::Display for IcosianQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.components();
        write!(f, "({} , {} , {} , {})", c[0], c[1], c[2], c[3])
    }
}

/// All even permutations of (0, 1, 2, 3).
fn even_permutations() -> Vec<[usize; 4]> {
    let mut perms = Vec::new();
    let mut items = [0, 1, 2, 3];
    permute(&mut items, 0, &mut perms);
    perms.into_iter().filter(|p| parity(p)).collect()
}

fn permute(items: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == 4 {
        out.push(*items);
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn parity(p: &[usize; 4]) -> bool {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

/// The 120 unit icosians:
///   (1/2)(±1, ±1, ±1, ±1),
///   (±1, 0, 0, 0) and all permutations,
///   (1/2)(0, ±1, ±tau', ±tau) and all even permutations.
pub fn icosian_generators() -> Vec<IcosianQuaternion> {
    let mut out = Vec::with_capacity(120);
    // (1/2)(±1,±1,±1,±1): doubled components ±1
    for mask in 0..16u32 {
        let num = std::array::from_fn(|i| {
            GoldenInt::new(if mask >> i & 1 == 1 { -1 } else { 1 }, 0)
        });
        out.push(IcosianQuaternion::from_doubled(num));
    }
    // (±1,0,0,0) and permutations: doubled components ±2
    for pos in 0..4 {
        for sgn in [1i64, -1] {
            let mut num = std::array::from_fn(|_| GoldenInt::zero());
            num[pos] = GoldenInt::new(2 * sgn, 0);
            out.push(IcosianQuaternion::from_doubled(num));
        }
    }
    // (1/2)(0, ±1, ±tau', ±tau), even permutations; doubled entries
    // are 0, ±1, ±(1 - tau), ±tau
    let base = [
        GoldenInt::zero(),
        GoldenInt::new(1, 0),
        GoldenInt::new(1, -1),
        GoldenInt::new(0, 1),
    ];
    for perm in even_permutations() {
        for mask in 0..8u32 {
            let mut signs = [1i64; 4];
            // sign choices apply to the three nonzero slots of `base`
            for (bit, slot) in [1usize, 2, 3].into_iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    signs[slot] = -1;
                }
            }
            let num = std::array::from_fn(|i| {
                let src = perm[i];
                let v = base[src].clone();
                if signs[src] < 0 {
                    -v
                } else {
                    v
                }
            });
            out.push(IcosianQuaternion::from_doubled(num));
        }
    }
    out
}

/// Exact componentwise inner product sum_i a_i b_i in Q(tau).
pub fn golden_dot(a: &IcosianQuaternion, b: &IcosianQuaternion) -> GoldenRational {
    let (ca, cb) = (a.components(), b.components());
    let mut s = GoldenRational::zero();
    for (x, y) in ca.into_iter().zip(cb) {
        s = s + x * y;
    }
    s
}

/// Field trace tr(x) = x + x' of a golden rational, when it is a
/// rational integer: tr((a + b tau)/den) = (2a + b)/den.
pub fn trace_to_int(x: &GoldenRational) -> Option<BigInt> {
    let t = BigInt::from(2) * &x.num.a + &x.num.b;
    let (q, r) = num_integer::Integer::div_rem(&t, &x.den);
    if r.is_zero() {
        Some(q)
    } else {
        None
    }
}

fn index_of(units: &[IcosianQuaternion]) -> std::collections::HashMap<[BigInt; 8], usize> {
    units
        .iter()
        .enumerate()
        .map(|(i, q)| (q.doubled_coords(), i))
        .collect()
}

/// All |units|^2 pairwise products land back in the set.
pub fn multiplication_closed(units: &[IcosianQuaternion]) -> bool {
    let idx = index_of(units);
    units.iter().all(|a| {
        units
            .iter()
            .all(|b| idx.contains_key(&a.multiply(b).doubled_coords()))
    })
}

/// Every map x -> u x v permutes the set. Since u x v = (u x) v it is
/// enough that each left multiplication and each right multiplication
/// acts as a bijection of the set.
pub fn maps_permute(units: &[IcosianQuaternion]) -> bool {
    let idx = index_of(units);
    let n = units.len();
    for u in units {
        let mut left = vec![false; n];
        let mut right = vec![false; n];
        for x in units {
            match idx.get(&u.multiply(x).doubled_coords()) {
                Some(&i) if !left[i] => left[i] = true,
                _ => return false,
            }
            match idx.get(&x.multiply(u).doubled_coords()) {
                Some(&i) if !right[i] => right[i] = true,
                _ => return false,
            }
        }
    }
    true
}

/// The E8 pairing on the icosian ring: the twisted trace
/// T(x, y) = 2 tr((tau / sqrt 5) sum_i x_i y_i), which for a golden
/// rational (a + b tau)/den evaluates to 2(a + b)/den. The plain trace
/// form tr(sum x_i y_i) is only half-integral on the ring (and has
/// determinant 5^4/2^8); this totally positive twist by tau/sqrt 5 is
/// what turns the embedded lattice into an even unimodular one, with
/// the 120 units and their tau^{-1}-multiples as the 240 roots.
pub fn e8_inner(x: &IcosianQuaternion, y: &IcosianQuaternion) -> Option<BigInt> {
    let z = golden_dot(x, y);
    let t = BigInt::from(2) * (&z.num.a + &z.num.b);
    let (q, r) = num_integer::Integer::div_rem(&t, &z.den);
    if r.is_zero() {
        Some(q)
    } else {
        None
    }
}

/// Gram matrix of a Z-basis under the E8 pairing; None signals a
/// non-integral entry, i.e. not a basis of the ring.
pub fn trace_gram(basis: &[IcosianQuaternion]) -> Option<Vec<Vec<BigInt>>> {
    let n = basis.len();
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = e8_inner(&basis[i], &basis[j])?;
        }
    }
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn unit(i: usize) -> IcosianQuaternion {
        // 1, i, j, k
        let mut c = [
            GoldenInt::zero(),
            GoldenInt::zero(),
            GoldenInt::zero(),
            GoldenInt::zero(),
        ];
        c[i] = GoldenInt::one();
        IcosianQuaternion::from_components(c)
    }

    #[test]
    fn quaternion_table() {
        let (i, j, k) = (unit(1), unit(2), unit(3));
        assert_eq!(i.multiply(&j), k);
        assert_eq!(j.multiply(&k), i);
        assert_eq!(k.multiply(&i), j);
        assert_eq!(j.multiply(&i), k.neg());
        let one = IcosianQuaternion::one();
        let q = IcosianQuaternion::from_doubled([
            GoldenInt::new(1, 0),
            GoldenInt::new(1, 0),
            GoldenInt::new(1, 0),
            GoldenInt::new(1, 0),
        ]);
        assert_eq!(one.multiply(&q), q);
        // ((1+i+j+k)/2)^2 = (-1+i+j+k)/2, by brute-force expansion
        let sq = q.multiply(&q);
        assert_eq!(
            sq,
            IcosianQuaternion::from_doubled([
                GoldenInt::new(-1, 0),
                GoldenInt::new(1, 0),
                GoldenInt::new(1, 0),
                GoldenInt::new(1, 0),
            ])
        );
    }

    #[test]
    fn generators_cardinality_and_norm() {
        let gens = icosian_generators();
        assert_eq!(gens.len(), 120);
        let distinct: HashSet<_> = gens.iter().map(|q| q.doubled_coords()).collect();
        assert_eq!(distinct.len(), 120);
        let one = GoldenRational::from_integers(1, 0);
        for q in &gens {
            assert_eq!(q.norm(), one);
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let gens = icosian_generators();
        for step in [7usize, 13, 29] {
            for i in (0..120).step_by(step) {
                let a = &gens[i];
                let b = &gens[(i * 31 + step) % 120];
                let ab = a.multiply(b);
                assert_eq!(ab.norm(), a.norm() * b.norm());
            }
        }
    }
}
