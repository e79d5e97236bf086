//! The structural-query contract shared by every group backend.
//!
//! Elements are dense ids `0..order`. Backends supply multiplication,
//! inversion and the designated generators; everything else here is
//! generic: subgroup closure, center, centralizers, derived subgroup,
//! power and omega subgroups, exponent, Frattini rank, and the class-2 /
//! 2-Engel checks. All scans are deterministic; results never depend on
//! the caller's parallelism.

use thiserror::Error;

pub type ElemId = u32;

/// Cap on exhaustive full-group scans (3^12 elements). Larger groups are
/// refused with an estimate instead of silently sampling.
pub const SCAN_CAP: usize = 531_441;

/// Cap on exhaustive pairwise scans such as the 2-Engel check (3^6
/// elements, i.e. 3^12 pairs).
pub const PAIR_SCAN_CAP: usize = 729;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("exhaustive scan over {order} elements exceeds the cap {cap}")]
    ScanRefused { order: usize, cap: usize },
    #[error("exhaustive pair scan over {order}^2 pairs exceeds the cap {cap}^2; use a sampled check")]
    PairScanRefused { order: usize, cap: usize },
    #[error("the set is not closed under multiplication: elements {0} * {1} fall outside it")]
    NotClosed(ElemId, ElemId),
    #[error("group order {0} is not a prime power")]
    NotAPGroup(usize),
}

pub trait FiniteGroup: Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> ElemId;
    fn mul(&self, a: ElemId, b: ElemId) -> ElemId;
    fn inv(&self, a: ElemId) -> ElemId;
    /// Designated generators, in their fixed order.
    fn generators(&self) -> Vec<ElemId>;
    /// Human-readable label for an element, used in reports.
    fn element_label(&self, a: ElemId) -> String {
        format!("#{a}")
    }
}

/// `a^n` by binary exponentiation; negative exponents go through `inv`.
pub fn pow<G: FiniteGroup + ?Sized>(g: &G, a: ElemId, n: i64) -> ElemId {
    let (mut base, mut e) = if n < 0 { (g.inv(a), n.unsigned_abs()) } else { (a, n as u64) };
    let mut acc = g.identity();
    while e > 0 {
        if e & 1 == 1 {
            acc = g.mul(acc, base);
        }
        base = g.mul(base, base);
        e >>= 1;
    }
    acc
}

/// `[a, b] = a^-1 b^-1 a b`.
pub fn commutator<G: FiniteGroup + ?Sized>(g: &G, a: ElemId, b: ElemId) -> ElemId {
    let t = g.mul(g.inv(a), g.inv(b));
    g.mul(g.mul(t, a), b)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Order of `a`, computed by stripping prime factors from `|G|`.
pub fn element_order<G: FiniteGroup + ?Sized>(g: &G, a: ElemId) -> u64 {
    let e = g.identity();
    let mut n = g.order() as u64;
    for (p, k) in factorize(n) {
        for _ in 0..k {
            let cand = n / p;
            if pow(g, a, cand as i64) == e {
                n = cand;
            } else {
                break;
            }
        }
    }
    n
}

/// Least common multiple of all element orders.
pub fn exponent<G: FiniteGroup + ?Sized>(g: &G) -> Result<u64, GroupError> {
    scan_guard(g)?;
    let mut acc = 1u64;
    for a in 0..g.order() as ElemId {
        let o = element_order(g, a);
        acc = lcm(acc, o);
    }
    Ok(acc)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `p` when `|G| = p^k`, otherwise an error.
pub fn group_prime<G: FiniteGroup + ?Sized>(g: &G) -> Result<u64, GroupError> {
    let f = factorize(g.order() as u64);
    match f.as_slice() {
        [(p, _)] => Ok(*p),
        _ => Err(GroupError::NotAPGroup(g.order())),
    }
}

fn scan_guard<G: FiniteGroup + ?Sized>(g: &G) -> Result<(), GroupError> {
    if g.order() > SCAN_CAP {
        return Err(GroupError::ScanRefused { order: g.order(), cap: SCAN_CAP });
    }
    Ok(())
}

/// An explicit subgroup: sorted element set plus the witness generators it
/// was closed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<ElemId>,
    generators: Vec<ElemId>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ElemId] {
        &self.elements
    }

    pub fn generators(&self) -> &[ElemId] {
        &self.generators
    }

    pub fn contains(&self, a: ElemId) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&a| other.contains(a))
    }

    /// Closure is an invariant of construction; this re-verifies it and
    /// returns the violating pair if the set was tampered with.
    pub fn verify_closed<G: FiniteGroup + ?Sized>(&self, g: &G) -> Result<(), GroupError> {
        for &a in &self.elements {
            for &b in &self.elements {
                if !self.contains(g.mul(a, b)) {
                    return Err(GroupError::NotClosed(a, b));
                }
            }
        }
        Ok(())
    }
}

/// Breadth-first closure of `seeds` under multiplication. Deterministic:
/// elements are discovered in BFS order with seeds applied in order.
pub fn closure<G: FiniteGroup + ?Sized>(g: &G, seeds: &[ElemId]) -> Subgroup {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut queue: Vec<ElemId> = Vec::new();
    let e = g.identity();
    seen[e as usize] = true;
    queue.push(e);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &s in seeds {
            let y = g.mul(x, s);
            if !seen[y as usize] {
                seen[y as usize] = true;
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    Subgroup { elements: queue, generators: seeds.to_vec() }
}

/// All elements commuting with every designated generator. Since the
/// generators generate, this is exactly the center.
pub fn center<G: FiniteGroup + ?Sized>(g: &G) -> Result<Subgroup, GroupError> {
    scan_guard(g)?;
    let gens = g.generators();
    let elements: Vec<ElemId> = (0..g.order() as ElemId)
        .filter(|&x| gens.iter().all(|&s| g.mul(x, s) == g.mul(s, x)))
        .collect();
    Ok(Subgroup { elements, generators: Vec::new() })
}

/// Exhaustive centralizer scan `{x : xg = gx}`.
pub fn centralizer<G: FiniteGroup + ?Sized>(g: &G, a: ElemId) -> Result<Subgroup, GroupError> {
    scan_guard(g)?;
    let elements: Vec<ElemId> =
        (0..g.order() as ElemId).filter(|&x| g.mul(x, a) == g.mul(a, x)).collect();
    Ok(Subgroup { elements, generators: vec![a] })
}

/// Derived subgroup as the closure of `{[x, s] : x in G, s a designated
/// generator}`. Killing these commutators makes every generator central in
/// the quotient, so the quotient is abelian and the closure is all of G'.
pub fn derived_subgroup<G: FiniteGroup + ?Sized>(g: &G) -> Result<Subgroup, GroupError> {
    scan_guard(g)?;
    let gens = g.generators();
    let n = g.order();
    let mut seed_set = vec![false; n];
    let mut seeds = Vec::new();
    for x in 0..n as ElemId {
        for &s in &gens {
            let c = commutator(g, x, s);
            if !seed_set[c as usize] {
                seed_set[c as usize] = true;
                seeds.push(c);
            }
        }
    }
    let closed = closure(g, &seeds);
    let witness: Vec<ElemId> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| gens.iter().skip(i + 1).map(move |&b| (a, b)))
        .map(|(a, b)| commutator(g, a, b))
        .collect();
    Ok(Subgroup { elements: closed.elements, generators: witness })
}

/// The agemo `G^{p^n}`: closure of the set of `p^n`-th powers. Returns the
/// subgroup together with a flag telling whether the raw power set was
/// already closed.
pub fn power_subgroup<G: FiniteGroup + ?Sized>(
    g: &G,
    pn: u64,
) -> Result<(Subgroup, bool), GroupError> {
    scan_guard(g)?;
    let n = g.order();
    let mut in_set = vec![false; n];
    let mut powers = Vec::new();
    for x in 0..n as ElemId {
        let y = pow(g, x, pn as i64);
        if !in_set[y as usize] {
            in_set[y as usize] = true;
            powers.push(y);
        }
    }
    let closed = closure(g, &powers);
    let was_closed = closed.order() == powers.len();
    powers.sort_unstable();
    Ok((Subgroup { elements: closed.elements, generators: powers }, was_closed))
}

/// The omega set `{x : x^{p^n} = 1}`. Returns it as a subgroup together
/// with a closure flag; for the regular p-groups in this workbench the set
/// is always closed, and callers assert the flag rather than assume it.
pub fn omega_subgroup<G: FiniteGroup + ?Sized>(
    g: &G,
    pn: u64,
) -> Result<(Subgroup, bool), GroupError> {
    scan_guard(g)?;
    let e = g.identity();
    let elements: Vec<ElemId> =
        (0..g.order() as ElemId).filter(|&x| pow(g, x, pn as i64) == e).collect();
    let sub = Subgroup { elements, generators: Vec::new() };
    let closed = sub.verify_closed(g).is_ok();
    Ok((sub, closed))
}

/// Exponent of `G/N` computed from coset orders: for each `x`, the least
/// `k >= 1` with `x^k` in `N`. `N` must be normal.
pub fn quotient_exponent<G: FiniteGroup + ?Sized>(
    g: &G,
    n: &Subgroup,
) -> Result<u64, GroupError> {
    scan_guard(g)?;
    let mut acc = 1u64;
    for x in 0..g.order() as ElemId {
        let o = element_order(g, x);
        // The coset order divides the element order.
        let mut k = o;
        for (p, e) in factorize(o) {
            for _ in 0..e {
                let cand = k / p;
                if n.contains(pow(g, x, cand as i64)) {
                    k = cand;
                } else {
                    break;
                }
            }
        }
        acc = lcm(acc, k);
    }
    Ok(acc)
}

/// Frattini rank of a p-group: `d` with `|G : G^p G'| = p^d`.
pub fn generator_rank<G: FiniteGroup + ?Sized>(g: &G) -> Result<u32, GroupError> {
    let p = group_prime(g)?;
    let derived = derived_subgroup(g)?;
    let (powers, _) = power_subgroup(g, p)?;
    let mut seeds: Vec<ElemId> = derived.elements().to_vec();
    seeds.extend_from_slice(powers.generators());
    let frattini = closure(g, &seeds);
    let index = (g.order() / frattini.order()) as u64;
    let mut d = 0u32;
    let mut v = index;
    while v % p == 0 {
        v /= p;
        d += 1;
    }
    if v != 1 {
        return Err(GroupError::NotAPGroup(g.order()));
    }
    Ok(d)
}

/// Class at most 2 iff every commutator of designated generators is
/// central (then G/Z is abelian).
pub fn is_class_le2<G: FiniteGroup + ?Sized>(g: &G) -> bool {
    let gens = g.generators();
    for (i, &a) in gens.iter().enumerate() {
        for &b in gens.iter().skip(i + 1) {
            let c = commutator(g, a, b);
            if gens.iter().any(|&s| g.mul(c, s) != g.mul(s, c)) {
                return false;
            }
        }
    }
    true
}

/// How thoroughly a definitional check sweeps the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
}

/// 2-Engel check: `[[x,y],y] = 1`, equivalently `[x,y]` commutes with `y`.
pub fn is_2engel<G: FiniteGroup + ?Sized>(g: &G, mode: CheckMode) -> Result<bool, GroupError> {
    match mode {
        CheckMode::Exhaustive => {
            let n = g.order();
            if n > PAIR_SCAN_CAP {
                return Err(GroupError::PairScanRefused { order: n, cap: PAIR_SCAN_CAP });
            }
            for x in 0..n as ElemId {
                for y in 0..n as ElemId {
                    let c = commutator(g, x, y);
                    if g.mul(c, y) != g.mul(y, c) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        CheckMode::Sampled { seed, samples } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = g.order() as ElemId;
            for _ in 0..samples {
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                let c = commutator(g, x, y);
                if g.mul(c, y) != g.mul(y, c) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// A subgroup reindexed as a standalone group, so every structural query
/// here runs unchanged on it. Ids are positions in the sorted element set.
pub struct SubgroupView<'a, G: FiniteGroup + ?Sized> {
    parent: &'a G,
    elements: Vec<ElemId>,
    generators: Vec<ElemId>,
}

impl<'a, G: FiniteGroup + ?Sized> SubgroupView<'a, G> {
    pub fn new(parent: &'a G, sub: &Subgroup) -> Self {
        let elements = sub.elements().to_vec();
        let generators = sub
            .generators()
            .iter()
            .map(|&s| elements.binary_search(&s).expect("generator outside subgroup") as ElemId)
            .collect();
        SubgroupView { parent, elements, generators }
    }

    pub fn parent_id(&self, local: ElemId) -> ElemId {
        self.elements[local as usize]
    }
}

impl<'a, G: FiniteGroup + ?Sized> FiniteGroup for SubgroupView<'a, G> {
    fn order(&self) -> usize {
        self.elements.len()
    }

    fn identity(&self) -> ElemId {
        self.elements.binary_search(&self.parent.identity()).expect("identity outside subgroup")
            as ElemId
    }

    fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        let p = self.parent.mul(self.elements[a as usize], self.elements[b as usize]);
        self.elements.binary_search(&p).expect("subgroup not closed") as ElemId
    }

    fn inv(&self, a: ElemId) -> ElemId {
        let p = self.parent.inv(self.elements[a as usize]);
        self.elements.binary_search(&p).expect("subgroup not closed") as ElemId
    }

    fn generators(&self) -> Vec<ElemId> {
        self.generators.clone()
    }

    fn element_label(&self, a: ElemId) -> String {
        self.parent.element_label(self.elements[a as usize])
    }
}
