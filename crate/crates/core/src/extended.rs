//! Extended form class groups `Q_N(d_K) / ~_Gamma` for the congruence
//! subgroups `Gamma = { gamma ≡ [t^-1 *; 0 t] (mod N) : t ∈ T }`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd, gcd, mod_inv, modulo};
use crate::error::{Error, Result};
use crate::field::{FracIdeal, ImagQuadField};
use crate::forms::{enumerate_reduced, QuadForm, Unimodular};
use crate::serde_int;

/// A subgroup `T` of `(Z/NZ)^*`, stored as sorted least residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupT {
    #[serde(rename = "N", with = "serde_int")]
    n: Integer,
    #[serde(with = "serde_int::vec")]
    elements: Vec<Integer>,
}

impl SubgroupT {
    /// Validates closure, coprimality and the presence of `1`.
    pub fn new(n: impl Into<Integer>, residues: &[Integer]) -> Result<Self> {
        let n = n.into();
        if n < 1 {
            return Err(Error::InvalidSubgroup(format!(
                "modulus {n} must be positive"
            )));
        }
        let set: BTreeSet<Integer> = residues.iter().map(|r| modulo(r, &n)).collect();
        let one = modulo(&Integer::from(1), &n);
        if !set.contains(&one) {
            return Err(Error::InvalidSubgroup("does not contain 1".into()));
        }
        for x in &set {
            if gcd(x, &n) != 1 {
                return Err(Error::InvalidSubgroup(format!("{x} is not a unit mod {n}")));
            }
            for y in &set {
                let p = modulo(&Integer::from(x * y), &n);
                if !set.contains(&p) {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed: {x}*{y} = {p} mod {n}"
                    )));
                }
            }
        }
        Ok(SubgroupT {
            n,
            elements: set.into_iter().collect(),
        })
    }

    /// `(Z/NZ)^*`.
    pub fn full(n: impl Into<Integer>) -> Result<Self> {
        let n = n.into();
        if n < 1 {
            return Err(Error::InvalidSubgroup(format!(
                "modulus {n} must be positive"
            )));
        }
        let units: Vec<Integer> = num_range(&n).filter(|x| gcd(x, &n) == 1).collect();
        Self::new(n, &units)
    }

    /// The trivial subgroup `{1}`.
    pub fn one(n: impl Into<Integer>) -> Result<Self> {
        Self::new(n, &[Integer::from(1)])
    }

    /// `"full"`, `"one"`, or a comma-separated residue list.
    pub fn parse(spec: &str, n: impl Into<Integer>) -> Result<Self> {
        let n = n.into();
        match spec.trim() {
            "full" => Self::full(n),
            "one" => Self::one(n),
            list => {
                let residues = list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<Integer>()
                            .map_err(|e| Error::Parse(format!("T element {s:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(n, &residues)
            }
        }
    }

    pub fn modulus(&self) -> &Integer {
        &self.n
    }

    pub fn elements(&self) -> &[Integer] {
        &self.elements
    }

    pub fn contains(&self, t: &Integer) -> bool {
        self.elements.binary_search(&modulo(t, &self.n)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl fmt::Display for SubgroupT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}} mod {}", parts.join(","), self.n)
    }
}

fn num_range(n: &Integer) -> impl Iterator<Item = Integer> {
    let n = n.to_u64().expect("modulus fits in u64");
    (0..n).map(Integer::from)
}

/// A row `[u v]` of residues mod `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowVec {
    #[serde(with = "serde_int")]
    pub u: Integer,
    #[serde(with = "serde_int")]
    pub v: Integer,
}

impl RowVec {
    pub fn new(u: impl Into<Integer>, v: impl Into<Integer>) -> Self {
        RowVec {
            u: u.into(),
            v: v.into(),
        }
    }

    pub fn reduced(&self, n: &Integer) -> RowVec {
        RowVec::new(modulo(&self.u, n), modulo(&self.v, n))
    }

    /// `t [u v] M (mod N)`.
    fn act(&self, t: &Integer, m: &[[Integer; 2]; 2], n: &Integer) -> RowVec {
        let x = Integer::from(&self.u * &m[0][0]) + Integer::from(&self.v * &m[1][0]);
        let y = Integer::from(&self.u * &m[0][1]) + Integer::from(&self.v * &m[1][1]);
        RowVec::new(modulo(&(x * t), n), modulo(&(y * t), n))
    }
}

impl fmt::Display for RowVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", self.u, self.v)
    }
}

/// The group `Gamma_Q` of residue matrices mod `N`, signs included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaQTable {
    pub n: Integer,
    pub matrices: Vec<[[Integer; 2]; 2]>,
}

/// `gamma ≡ [t^-1 *; 0 t] (mod N)` for some `t ∈ T`.
pub fn gamma_member(g: &Unimodular, t: &SubgroupT) -> bool {
    let n = t.modulus();
    g.r.is_divisible(n) && t.contains(&g.s)
}

/// Residue images of the units of `O_K` acting on rows `[u v]` attached to `Q`.
///
/// For a unit `m tau_K + n` the matrix is
/// `[[n - m (b_K + b)/2, m a^-1 ((b_K^2 - b^2)/4 - c_K)], [m a, n - m (b_K - b)/2]]`.
pub fn gamma_q_table(q: &QuadForm, field: &ImagQuadField, n: &Integer) -> Result<GammaQTable> {
    let a_inv = mod_inv(&q.a, n).ok_or_else(|| Error::NotPrimeToLevel {
        a: q.a.to_string(),
        n: n.to_string(),
    })?;
    let half_sum = Integer::from(&field.b_k + &q.b) / 2;
    let half_diff = Integer::from(&field.b_k - &q.b) / 2;
    let corner =
        (Integer::from(&field.b_k * &field.b_k) - Integer::from(&q.b * &q.b)) / 4 - &field.c_k;
    let mut matrices = Vec::new();
    for unit in field.units() {
        let m = unit.y.numer().clone();
        let k = unit.x.numer().clone();
        let mat = [
            [
                modulo(&(Integer::from(&k) - Integer::from(&m * &half_sum)), n),
                modulo(&(Integer::from(&m * &a_inv) * &corner), n),
            ],
            [
                modulo(&Integer::from(&m * &q.a), n),
                modulo(&(Integer::from(&k) - Integer::from(&m * &half_diff)), n),
            ],
        ];
        let det = Integer::from(&mat[0][0] * &mat[1][1]) - Integer::from(&mat[0][1] * &mat[1][0]);
        debug_assert_eq!(modulo(&det, n), modulo(&Integer::from(1), n));
        matrices.push(mat);
    }
    Ok(GammaQTable {
        n: n.clone(),
        matrices,
    })
}

/// `[r s] ≡ ±t [u v] gamma (mod N)` for some `t ∈ T`, `gamma ∈ Gamma_Q`.
pub fn row_equivalent(r: &RowVec, u: &RowVec, table: &GammaQTable, t: &SubgroupT) -> bool {
    let n = t.modulus();
    let target = r.reduced(n);
    table
        .matrices
        .iter()
        .any(|m| t.elements().iter().any(|x| u.act(x, m, n) == target))
}

/// Is `[u v]` in `M_Q`, i.e. `gcd(N, Q(v, -u)) = 1`?
pub fn in_mq(q: &QuadForm, row: &RowVec, n: &Integer) -> bool {
    ImagQuadField::element_ideal_prime_to(q, &row.u, &row.v, n)
}

/// All residue rows of `M_Q` in lexicographic order.
pub fn mq_rows(q: &QuadForm, n: &Integer) -> Vec<RowVec> {
    let mut rows = Vec::new();
    for u in num_range(n) {
        for v in num_range(n) {
            let row = RowVec::new(u.clone(), v);
            if in_mq(q, &row, n) {
                rows.push(row);
            }
        }
    }
    rows
}

/// One lexicographically minimal row per `≡_Q` class of `M_Q`.
pub fn enumerate_mq_classes(
    q: &QuadForm,
    field: &ImagQuadField,
    t: &SubgroupT,
) -> Result<Vec<RowVec>> {
    let n = t.modulus();
    let table = gamma_q_table(q, field, n)?;
    let mut seen: BTreeSet<RowVec> = BTreeSet::new();
    let mut reps = Vec::new();
    for row in mq_rows(q, n) {
        if seen.contains(&row) {
            continue;
        }
        for m in &table.matrices {
            for x in t.elements() {
                seen.insert(row.act(x, m, n));
            }
        }
        reps.push(row);
    }
    Ok(reps)
}

/// The lexicographically least row in the `≡_Q` class of `row`.
pub fn canonical_row(row: &RowVec, table: &GammaQTable, t: &SubgroupT) -> RowVec {
    let n = t.modulus();
    table
        .matrices
        .iter()
        .flat_map(|m| t.elements().iter().map(move |x| row.act(x, m, n)))
        .min()
        .expect("Gamma_Q is nonempty")
}

/// An `SL2(Z)` matrix whose bottom row is congruent to `(u, v)` mod `N`.
pub fn lift_bottom_row(u: &Integer, v: &Integer, n: &Integer) -> Result<Unimodular> {
    if gcd(&gcd(u, v), n) != 1 {
        return Err(Error::RowNotPrimitive {
            u: u.to_string(),
            v: v.to_string(),
            n: n.to_string(),
        });
    }
    if *n == 1 {
        return Ok(Unimodular::identity());
    }
    let mut uu = modulo(u, n);
    let v0 = modulo(v, n);
    if uu == 0 && v0 != 1 {
        uu = n.clone();
    }
    let mut vv = v0;
    while gcd(&uu, &vv) != 1 {
        vv += n;
    }
    let (_, x, y) = ext_gcd(&uu, &vv);
    // x uu + y vv = 1, so [[y, -x], [uu, vv]] has determinant one.
    Unimodular::new(y, -x, uu, vv)
}

/// `(Q^gamma, gamma)` with the leading coefficient of `Q^gamma` prime to `N`.
pub fn make_prime_to_n(q: &QuadForm, n: &Integer) -> (QuadForm, Unimodular) {
    if gcd(&q.a, n) == 1 {
        return (q.clone(), Unimodular::identity());
    }
    let mut k = Integer::from(1);
    loop {
        for (p, r) in shell(&k) {
            if gcd(&p, &r) != 1 || gcd(&q.eval(&p, &r), n) != 1 {
                continue;
            }
            let (_, x, y) = ext_gcd(&p, &r);
            let g = Unimodular::new(p, -y, r, x).expect("x p + y r = 1");
            return (q.act(&g), g);
        }
        k += 1;
    }
}

/// Pairs `(p, r)` with `max(|p|, |r|) = k`, one of each `±` pair, `p` ascending.
fn shell(k: &Integer) -> Vec<(Integer, Integer)> {
    let kk = k.to_i64().expect("search radius fits in i64");
    let mut out = Vec::new();
    for p in 0..=kk {
        for r in -kk..=kk {
            if p.abs().max(r.abs()) != kk || (p == 0 && r < 0) {
                continue;
            }
            out.push((Integer::from(p), Integer::from(r)));
        }
    }
    out
}

/// `[omega_Q, 1]`, defined on forms whose leading coefficient is prime to `N`.
pub fn phi_gamma(q: &QuadForm, field: &ImagQuadField, n: &Integer) -> Result<FracIdeal> {
    if gcd(&q.a, n) != 1 {
        return Err(Error::NotPrimeToLevel {
            a: q.a.to_string(),
            n: n.to_string(),
        });
    }
    field.ideal_from_form(q)
}

/// `Q ~_Gamma Q'`, decided on the ideal side.
pub fn equivalent_mod_gamma(
    q1: &QuadForm,
    q2: &QuadForm,
    field: &ImagQuadField,
    t: &SubgroupT,
) -> Result<bool> {
    let n = t.modulus();
    let a = phi_gamma(q1, field, n)?;
    let b = phi_gamma(q2, field, n)?;
    Ok(field.class_equal_mod_p(&a, &b, t))
}

/// Looks for `gamma ∈ Gamma` with entries bounded by `bound` and `q1^gamma = q2`.
/// Incomplete by nature; meant for cross-checking.
pub fn witness_search(
    q1: &QuadForm,
    q2: &QuadForm,
    t: &SubgroupT,
    bound: i64,
) -> Option<Unimodular> {
    if q1.discriminant() != q2.discriminant() {
        return None;
    }
    let n = t.modulus();
    for p in -bound..=bound {
        for r in -bound..=bound {
            let (p, r) = (Integer::from(p), Integer::from(r));
            if !r.is_divisible(n) || gcd(&p, &r) != 1 || q1.eval(&p, &r) != q2.a {
                continue;
            }
            let (_, x, y) = ext_gcd(&p, &r);
            // Every completion is [[p, -y + j p], [r, x + j r]]; the middle
            // coefficient moves by 2 a' j.
            let base = Unimodular::new(p.clone(), Integer::from(-&y), r.clone(), x.clone())
                .expect("x p + y r = 1");
            let b0 = q1.act(&base).b;
            let diff = Integer::from(&q2.b - &b0);
            let step = Integer::from(&q2.a * 2);
            if !diff.is_divisible(&step) {
                continue;
            }
            let j = diff / step;
            let qq = Integer::from(-&y) + Integer::from(&j * &p);
            let ss = x + Integer::from(&j * &r);
            if qq.clone().abs() > bound || ss.clone().abs() > bound {
                continue;
            }
            let g = Unimodular::new(p, qq, r, ss).expect("determinant preserved");
            if gamma_member(&g, t) && q1.act(&g) == *q2 {
                return Some(g);
            }
        }
    }
    None
}

fn canonical_key(q: &QuadForm) -> (Integer, Integer, Integer, bool) {
    (q.a.clone(), q.b.clone().abs(), q.c.clone(), q.b < 0)
}

/// The representative for row class `row` over `Q'`: the best of a few
/// `Gamma(N)`-related lifts of `Q'^{sigma^-1}`, each translated into `-a < b <= a`.
fn representative_for_row(q: &QuadForm, row: &RowVec, n: &Integer) -> Result<QuadForm> {
    let sigma = lift_bottom_row(&row.u, &row.v, n)?;
    let mut lifts = vec![sigma.clone()];
    if *n != 1 {
        for k in [-1i64, 1] {
            let kn = Integer::from(n * k);
            lifts.push(Unimodular::translation(kn.clone()).mul(&sigma));
            lifts.push(Unimodular::new(1, 0, kn, 1)?.mul(&sigma));
        }
    }
    let best = lifts
        .iter()
        .map(|s| q.act(&s.inverse()).normalize_translation().0)
        .min_by_key(canonical_key)
        .expect("at least one lift");
    Ok(best)
}

/// `Q_N(d_K) / ~_Gamma` with its group law transported from ideals.
#[derive(Clone, Debug)]
pub struct ExtClassGroup {
    pub field: ImagQuadField,
    pub n: Integer,
    pub t: SubgroupT,
    pub reps: Vec<QuadForm>,
    pub ideals: Vec<FracIdeal>,
    pub table: Vec<Vec<usize>>,
    pub identity_index: usize,
    pub inverse_indices: Vec<usize>,
}

/// One representative per `~_Gamma` class, grouped by classical class.
pub fn representatives(field: &ImagQuadField, t: &SubgroupT) -> Result<ExtClassGroup> {
    let n = t.modulus().clone();
    let reduced = enumerate_reduced(&field.d)?;
    let per_class: Vec<Vec<QuadForm>> = reduced
        .par_iter()
        .map(|qi| {
            let (qp, _) = make_prime_to_n(qi, &n);
            let rows = enumerate_mq_classes(&qp, field, t)?;
            rows.par_iter()
                .map(|row| representative_for_row(&qp, row, &n))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let reps: Vec<QuadForm> = per_class.into_iter().flatten().collect();
    ExtClassGroup::from_reps(field, t, reps)
}

impl ExtClassGroup {
    /// Builds the composition table for a complete set of representatives.
    pub fn from_reps(field: &ImagQuadField, t: &SubgroupT, reps: Vec<QuadForm>) -> Result<Self> {
        let n = t.modulus().clone();
        let ideals = reps
            .iter()
            .map(|q| phi_gamma(q, field, &n))
            .collect::<Result<Vec<_>>>()?;
        let inverses: Vec<FracIdeal> = ideals.iter().map(|a| field.ideal_inv(a)).collect();
        let locate = |c: &FracIdeal| -> Result<usize> {
            inverses
                .iter()
                .position(|inv| field.in_p(&field.ideal_mul(c, inv), t))
                .ok_or_else(|| Error::Inconsistent(format!("ideal {c} lies in no listed class")))
        };
        let table = ideals
            .par_iter()
            .map(|a| {
                ideals
                    .iter()
                    .map(|b| locate(&field.ideal_mul(a, b)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let identity_index = locate(&field.unit_ideal())?;
        let inverse_indices = table
            .iter()
            .map(|row| {
                row.iter()
                    .position(|&k| k == identity_index)
                    .ok_or_else(|| Error::Inconsistent("element without inverse".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtClassGroup {
            field: field.clone(),
            n,
            t: t.clone(),
            reps,
            ideals,
            table,
            identity_index,
            inverse_indices,
        })
    }

    /// The classical form class group `C(d_K)`, the case `N = 1`.
    pub fn classical(field: &ImagQuadField) -> Result<Self> {
        representatives(field, &SubgroupT::one(1)?)
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn compose(&self, i: usize, j: usize) -> Result<usize> {
        let row = self.table.get(i).ok_or(Error::IndexOutOfRange(i))?;
        row.get(j).copied().ok_or(Error::IndexOutOfRange(j))
    }

    /// Index of the class containing a form of `Q_N(d_K)`.
    pub fn class_of(&self, q: &QuadForm) -> Result<usize> {
        let a = phi_gamma(q, &self.field, &self.n)?;
        self.ideals
            .iter()
            .position(|b| self.field.class_equal_mod_p(&a, b, &self.t))
            .ok_or_else(|| Error::Inconsistent(format!("form {q} lies in no listed class")))
    }

    /// Sends each representative to its reduced form, as an index into `C(d_K)`.
    pub fn natural_map(&self) -> Result<NaturalMap> {
        let target = ExtClassGroup::classical(&self.field)?;
        let image =
            self.reps
                .iter()
                .map(|q| {
                    let r = q.reduce().0;
                    target.reps.iter().position(|x| *x == r).ok_or_else(|| {
                        Error::Inconsistent(format!("reduced form {r} not enumerated"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        Ok(NaturalMap { target, image })
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            d_k: self.field.d.clone(),
            n: self.n.clone(),
            t: self.t.elements().to_vec(),
            reps: self.reps.clone(),
            table: self.table.clone(),
            identity_index: self.identity_index,
            inverse_indices: self.inverse_indices.clone(),
        }
    }
}

/// The surjection `Q_N(d_K)/~_Gamma -> C(d_K)`.
#[derive(Clone, Debug)]
pub struct NaturalMap {
    pub target: ExtClassGroup,
    pub image: Vec<usize>,
}

impl NaturalMap {
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target.order()];
        for &k in &self.image {
            sizes[k] += 1;
        }
        sizes
    }

    pub fn is_homomorphism(&self, source: &ExtClassGroup) -> bool {
        (0..source.order()).all(|i| {
            (0..source.order()).all(|j| {
                self.image[source.table[i][j]] == self.target.table[self.image[i]][self.image[j]]
            })
        })
    }
}

/// Wire form of an extended class group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupJson {
    #[serde(rename = "d_K", with = "serde_int")]
    pub d_k: Integer,
    #[serde(rename = "N", with = "serde_int")]
    pub n: Integer,
    #[serde(rename = "T", with = "serde_int::vec")]
    pub t: Vec<Integer>,
    pub reps: Vec<QuadForm>,
    pub table: Vec<Vec<usize>>,
    pub identity_index: usize,
    pub inverse_indices: Vec<usize>,
}
