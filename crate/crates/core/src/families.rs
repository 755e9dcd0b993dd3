//! Matching families over Z_m^n: verification, type classification,
//! factor reductions of typed pairs, the simple binomial and set-system
//! constructions, the unique-neighbor equivalence, and an exact
//! backtracking search for the largest family on tiny instances.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bounds::{kappa, reference_bound};
use crate::error::{Error, Result};
use crate::incidence::IncidenceStructure;
use crate::ring::{class_min_entries, content, dot, ModVector, Modulus};

/// A candidate matching family: paired vector lists over Z_m^n and the
/// allowed cross-product set S. The defining conditions are checked by
/// [`verify`], not by construction, so invalid files can be loaded and
/// diagnosed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingFamily {
    modulus: Modulus,
    n: u32,
    u: Vec<ModVector>,
    v: Vec<ModVector>,
    s: BTreeSet<u64>,
}

/// The default cross-product set Z_m minus zero.
pub fn full_cross_set(m: u64) -> BTreeSet<u64> {
    (1..m).collect()
}

impl MatchingFamily {
    /// Builds a family, inferring the modulus and dimension from the first
    /// vector; use [`MatchingFamily::with_parts`] when the lists may be
    /// empty.
    pub fn new(
        u: Vec<ModVector>,
        v: Vec<ModVector>,
        s: Option<BTreeSet<u64>>,
    ) -> Result<Self> {
        let (modulus, n) = match u.first().or_else(|| v.first()) {
            Some(w) => (w.modulus().clone(), w.dim() as u32),
            None => (Modulus::new(2)?, 0),
        };
        Self::with_parts(modulus, n, u, v, s)
    }

    /// Builds a family with an explicit modulus and dimension, so empty
    /// families keep their parameters.
    pub fn with_parts(
        modulus: Modulus,
        n: u32,
        u: Vec<ModVector>,
        v: Vec<ModVector>,
        s: Option<BTreeSet<u64>>,
    ) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                left: u.len(),
                right: v.len(),
            });
        }
        for w in u.iter().chain(&v) {
            if w.modulus().value() != modulus.value() {
                return Err(Error::ModulusMismatch {
                    left: w.modulus().value(),
                    right: modulus.value(),
                });
            }
            if w.dim() as u32 != n {
                return Err(Error::DimensionMismatch {
                    left: w.dim(),
                    right: n as usize,
                });
            }
        }
        let s = s.unwrap_or_else(|| full_cross_set(modulus.value()));
        if let Some(&bad) = s.iter().find(|&&x| x == 0 || x >= modulus.value()) {
            return Err(Error::InvalidCrossSet {
                value: bad,
                m: modulus.value(),
            });
        }
        Ok(Self { modulus, n, u, v, s })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn u_side(&self) -> &[ModVector] {
        &self.u
    }

    pub fn v_side(&self) -> &[ModVector] {
        &self.v
    }

    pub fn cross_set(&self) -> &BTreeSet<u64> {
        &self.s
    }

    /// The subfamily at the given pair indices, order preserved.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut u = Vec::with_capacity(indices.len());
        let mut v = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
            u.push(self.u[i].clone());
            v.push(self.v[i].clone());
        }
        Self::with_parts(self.modulus.clone(), self.n, u, v, Some(self.s.clone()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dump = |side: &[ModVector]| {
            serde_json::Value::Array(
                side.iter()
                    .map(|w| {
                        serde_json::Value::Array(
                            w.entries().iter().map(|&e| e.into()).collect(),
                        )
                    })
                    .collect(),
            )
        };
        serde_json::json!({
            "m": self.modulus.value(),
            "n": self.n,
            "S": self.s.iter().collect::<Vec<_>>(),
            "U": dump(&self.u),
            "V": dump(&self.v),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            m: u64,
            n: u32,
            #[serde(rename = "S")]
            s: Option<Vec<u64>>,
            #[serde(rename = "U")]
            u: Vec<Vec<u64>>,
            #[serde(rename = "V")]
            v: Vec<Vec<u64>>,
        }
        let raw: Raw = serde_json::from_value(value.clone())?;
        let modulus = Modulus::new(raw.m)?;
        let lift = |rows: Vec<Vec<u64>>| -> Result<Vec<ModVector>> {
            rows.into_iter()
                .map(|row| {
                    if row.len() as u32 != raw.n {
                        return Err(Error::DimensionMismatch {
                            left: row.len(),
                            right: raw.n as usize,
                        });
                    }
                    Ok(ModVector::new(row, modulus.clone()))
                })
                .collect()
        };
        Self::with_parts(
            modulus.clone(),
            raw.n,
            lift(raw.u)?,
            lift(raw.v)?,
            raw.s.map(|s| s.into_iter().collect()),
        )
    }
}

/// One broken condition: the diagonal pair i with a nonzero product, or the
/// cross pair (i, j) whose product falls outside S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub value: u64,
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Checks both defining conditions, reporting every broken pair.
pub fn verify(fam: &MatchingFamily) -> Result<VerifyOutcome> {
    let mut violations = Vec::new();
    for i in 0..fam.len() {
        for j in 0..fam.len() {
            let value = dot(&fam.u[i], &fam.v[j])?;
            let ok = if i == j {
                value == 0
            } else {
                fam.s.contains(&value)
            };
            if !ok {
                violations.push(Violation { i, j, value });
            }
        }
    }
    Ok(VerifyOutcome {
        ok: violations.is_empty(),
        violations,
    })
}

/// Pairs grouped by type (content of u_i, content of v_i), with the classes
/// contradicting the "m | st implies at most one pair" lemma flagged.
#[derive(Debug, Clone)]
pub struct FamilyClassification {
    pub m: u64,
    pub members: BTreeMap<(u64, u64), Vec<usize>>,
    pub lemma_violations: Vec<(u64, u64)>,
}

impl FamilyClassification {
    pub fn count(&self, class: (u64, u64)) -> u64 {
        self.members.get(&class).map_or(0, |v| v.len() as u64)
    }

    pub fn total(&self) -> u64 {
        self.members.values().map(|v| v.len() as u64).sum()
    }
}

pub fn classify(fam: &MatchingFamily) -> FamilyClassification {
    let m = fam.modulus().value();
    let mut members: BTreeMap<(u64, u64), Vec<usize>> = BTreeMap::new();
    for i in 0..fam.len() {
        let class = (content(&fam.u[i]), content(&fam.v[i]));
        members.entry(class).or_default().push(i);
    }
    let lemma_violations = members
        .iter()
        .filter(|(&(s, t), idx)| (s as u128 * t as u128).is_multiple_of(m as u128) && idx.len() > 1)
        .map(|(&c, _)| c)
        .collect();
    FamilyClassification {
        m,
        members,
        lemma_violations,
    }
}

/// Divides every entry by the exact factor `d` and reduces to `target`.
fn scaled_reduction(w: &ModVector, d: u64, target: &Modulus) -> ModVector {
    let entries = w.entries().iter().map(|&e| (e / d) % target.value()).collect();
    ModVector::new(entries, target.clone())
}

/// Reduces a one-class family over Z_pq to the complementary prime: a class
/// in {(1,p),(p,1),(p,p)} lands in Z_q^n via u' = (u/s) mod q and
/// v' = (v/t) mod q, and symmetrically for the q classes. Size is
/// preserved and the output verifies as a matching family.
pub fn reduce_typed(fam: &MatchingFamily, s: u64, t: u64) -> Result<MatchingFamily> {
    let m = fam.modulus().value();
    let factors = fam.modulus().factors();
    if factors.len() != 2 || factors.iter().any(|&(_, e)| e != 1) {
        return Err(Error::NotSemiprime(m));
    }
    let (p, q) = (factors[0].0, factors[1].0);
    let target = if [(1, p), (p, 1), (p, p)].contains(&(s, t)) {
        q
    } else if [(1, q), (q, 1), (q, q)].contains(&(s, t)) {
        p
    } else {
        return Err(Error::WrongType {
            index: 0,
            s,
            t,
            want_s: 1,
            want_t: p,
        });
    };
    let target = Modulus::new(target)?;
    for i in 0..fam.len() {
        let (cu, cv) = (content(&fam.u[i]), content(&fam.v[i]));
        if (cu, cv) != (s, t) {
            return Err(Error::WrongType {
                index: i,
                s: cu,
                t: cv,
                want_s: s,
                want_t: t,
            });
        }
    }
    let u = fam.u.iter().map(|w| scaled_reduction(w, s, &target)).collect();
    let v = fam.v.iter().map(|w| scaled_reduction(w, t, &target)).collect();
    MatchingFamily::with_parts(target, fam.n, u, v, None)
}

/// The binomial lower-bound construction for m <= n: U is every 0/1 vector
/// of Hamming weight m-1 (lexicographic order) and v_i = 1 - u_i.
pub fn simple_construction(m: u64, n: u32) -> Result<MatchingFamily> {
    if m > n as u64 {
        return Err(Error::ConstructionRange { m, n });
    }
    if n > 32 {
        return Err(Error::LimitExceeded {
            required: n as u64,
            limit: 32,
        });
    }
    let modulus = Modulus::new(m)?;
    let weight = (m - 1) as u32;
    let mut u = Vec::new();
    let mut v = Vec::new();
    for mask in 0u64..1 << n {
        if mask.count_ones() != weight {
            continue;
        }
        let bits: Vec<u64> = (0..n).map(|i| mask >> (n - 1 - i) & 1).collect();
        let flipped: Vec<u64> = bits.iter().map(|&b| 1 - b).collect();
        u.push(ModVector::new(bits, modulus.clone()));
        v.push(ModVector::new(flipped, modulus.clone()));
    }
    MatchingFamily::new(u, v, None)
}

/// A set system with restricted intersections over the ground set; plain
/// data, the modular conditions are checked at conversion time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetSystem {
    pub ground: usize,
    pub sets: Vec<BTreeSet<usize>>,
    #[serde(rename = "T")]
    pub t: BTreeSet<u64>,
    #[serde(rename = "S")]
    pub s: BTreeSet<u64>,
}

/// Converts a ({0}, S)-set system into the S-matching family of its
/// characteristic vectors (U = V). Every modular condition is checked and
/// the first broken one is reported.
pub fn from_set_system(sys: &SetSystem, m: u64) -> Result<MatchingFamily> {
    if sys.t.len() != 1 || !sys.t.contains(&0) {
        return Err(Error::SetSystemUnsupported);
    }
    if !sys.t.is_disjoint(&sys.s) {
        return Err(Error::SetSystemUnsupported);
    }
    let modulus = Modulus::new(m)?;
    for (i, f) in sys.sets.iter().enumerate() {
        if let Some(&el) = f.iter().find(|&&el| el == 0 || el > sys.ground) {
            return Err(Error::IndexOutOfRange {
                index: el,
                len: sys.ground,
            });
        }
        if !(f.len() as u64).is_multiple_of(m) {
            return Err(Error::FamilyViolation {
                i,
                j: i,
                value: f.len() as u64 % m,
            });
        }
        for (j, g) in sys.sets.iter().enumerate().take(i) {
            let inter = f.intersection(g).count() as u64 % m;
            if !sys.s.contains(&inter) {
                return Err(Error::FamilyViolation {
                    i,
                    j,
                    value: inter,
                });
            }
        }
    }
    let chars: Vec<ModVector> = sys
        .sets
        .iter()
        .map(|f| {
            let entries = (1..=sys.ground)
                .map(|el| u64::from(f.contains(&el)))
                .collect();
            ModVector::new(entries, modulus.clone())
        })
        .collect();
    MatchingFamily::new(chars.clone(), chars, Some(sys.s.clone()))
}

/// Turns a unique-neighbor set into a matching family: V is the private
/// witness of each point. Fails naming the first point without one.
pub fn family_from_unp(inc: &IncidenceStructure, u_set: &[usize]) -> Result<MatchingFamily> {
    let outcome = inc.unp_check(u_set)?;
    if !outcome.satisfied {
        return Err(Error::NoPrivateNeighbor {
            index: outcome.violator.expect("unsatisfied outcome names a point"),
        });
    }
    let points = inc.space().points();
    let mut u = Vec::with_capacity(u_set.len());
    let mut v = Vec::with_capacity(u_set.len());
    for &i in u_set {
        u.push(points[i].clone());
        v.push(points[outcome.witnesses[&i]].clone());
    }
    MatchingFamily::with_parts(
        inc.space().modulus().clone(),
        inc.space().dimension(),
        u,
        v,
        None,
    )
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    pub candidates: usize,
    pub visited: u64,
    pub bound_prunes: u64,
    pub class_prunes: u64,
    pub max_depth: usize,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub k_max: usize,
    pub witness: MatchingFamily,
    pub stats: SearchStats,
    /// Search-space conventions that are not forced by the definition.
    pub conventions: Vec<String>,
}

/// Exact maximum matching-family size by backtracking, with the witness
/// found first in lexicographic branch order. Candidates are canonical
/// class representatives whenever S is closed under unit scaling; the zero
/// vector is excluded by convention. Deterministic by construction.
pub fn brute_force_max(
    m: u64,
    n: u32,
    s: Option<BTreeSet<u64>>,
    limit: u64,
) -> Result<SearchResult> {
    let (result, _) = search_engine(m, n, s, limit, false)?;
    Ok(result)
}

/// Same search, additionally collecting every family of maximum size.
pub fn brute_force_all_max(
    m: u64,
    n: u32,
    s: Option<BTreeSet<u64>>,
    limit: u64,
) -> Result<(SearchResult, Vec<MatchingFamily>)> {
    search_engine(m, n, s, limit, true)
}

fn unit_invariant(s: &BTreeSet<u64>, modulus: &Modulus) -> bool {
    let m = modulus.value();
    modulus.units().iter().all(|&lambda| {
        s.iter()
            .map(|&v| (v as u128 * lambda as u128 % m as u128) as u64)
            .collect::<BTreeSet<u64>>()
            == *s
    })
}

/// Upper bound on the number of pairs a single (content-u, content-v) class
/// can hold in any valid family; `None` means uncapped. Sound for every
/// S inside Z_m minus zero: the m | st classes collide at zero, and the
/// typed classes reduce to a single-prime family capped by kappa.
fn class_cap(s: u64, t: u64, modulus: &Modulus, n: u32) -> Option<u64> {
    let m = modulus.value();
    if (s as u128 * t as u128).is_multiple_of(m as u128) {
        return Some(1);
    }
    let factors = modulus.factors();
    if factors.len() == 2 && factors.iter().all(|&(_, e)| e == 1) {
        let (p, q) = (factors[0].0, factors[1].0);
        if [(1, p), (p, 1), (p, p)].contains(&(s, t)) {
            return kappa(q, n).ok();
        }
        if [(1, q), (q, 1), (q, q)].contains(&(s, t)) {
            return kappa(p, n).ok();
        }
    }
    None
}

struct SearchSpace {
    candidates: Vec<ModVector>,
    dots: Vec<Vec<u64>>,
    contents: Vec<u64>,
    s_set: BTreeSet<u64>,
    caps: BTreeMap<(u64, u64), u64>,
    global_cap: Option<u64>,
    collect_all: bool,
}

struct SearchState {
    chosen: Vec<(usize, usize)>,
    used_v: Vec<bool>,
    class_counts: BTreeMap<(u64, u64), u64>,
    best: usize,
    best_pairs: Vec<(usize, usize)>,
    all_at_best: Vec<Vec<(usize, usize)>>,
    stats: SearchStats,
}

fn search_engine(
    m: u64,
    n: u32,
    s: Option<BTreeSet<u64>>,
    limit: u64,
    collect_all: bool,
) -> Result<(SearchResult, Vec<MatchingFamily>)> {
    let modulus = Modulus::new(m)?;
    let s_set = s.unwrap_or_else(|| full_cross_set(m));
    if let Some(&bad) = s_set.iter().find(|&&v| v == 0 || v >= m) {
        return Err(Error::InvalidCrossSet { value: bad, m });
    }
    let canonical = unit_invariant(&s_set, &modulus);
    let mut conventions = vec!["zero vectors excluded from both sides".to_string()];
    if canonical {
        conventions.push(
            "candidates canonicalized to unit-scaling class representatives".to_string(),
        );
    } else {
        conventions
            .push("S not closed under unit scaling; raw nonzero vectors searched".to_string());
    }

    let candidates = enumerate_candidates(n, &modulus, canonical);
    if candidates.len() as u64 > limit {
        return Err(Error::LimitExceeded {
            required: candidates.len() as u64,
            limit,
        });
    }
    let dots: Vec<Vec<u64>> = candidates
        .iter()
        .map(|a| {
            candidates
                .iter()
                .map(|b| dot(a, b).expect("same modulus and dimension"))
                .collect()
        })
        .collect();
    let contents: Vec<u64> = candidates.iter().map(content).collect();
    let mut caps = BTreeMap::new();
    for &cs in contents.iter() {
        for &ct in contents.iter() {
            if let Some(cap) = class_cap(cs, ct, &modulus, n) {
                caps.insert((cs, ct), cap);
            }
        }
    }
    let global_cap = if crate::arith::is_prime(m) {
        Some(reference_bound(m, n)?)
    } else {
        None
    };

    let space = SearchSpace {
        dots,
        contents,
        s_set: s_set.clone(),
        caps,
        global_cap,
        collect_all,
        candidates,
    };
    let mut state = SearchState {
        chosen: Vec::new(),
        used_v: vec![false; space.candidates.len()],
        class_counts: BTreeMap::new(),
        best: 0,
        best_pairs: Vec::new(),
        all_at_best: if collect_all { vec![Vec::new()] } else { Vec::new() },
        stats: SearchStats {
            candidates: space.candidates.len(),
            ..SearchStats::default()
        },
    };
    dfs(&space, &mut state, 0);

    let build = |pairs: &[(usize, usize)]| -> Result<MatchingFamily> {
        let u = pairs.iter().map(|&(i, _)| space.candidates[i].clone()).collect();
        let v = pairs.iter().map(|&(_, j)| space.candidates[j].clone()).collect();
        MatchingFamily::with_parts(modulus.clone(), n, u, v, Some(s_set.clone()))
    };
    let witness = build(&state.best_pairs)?;
    debug_assert!(verify(&witness)?.ok);
    let all = state
        .all_at_best
        .iter()
        .map(|pairs| build(pairs))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        SearchResult {
            k_max: state.best,
            witness,
            stats: state.stats,
            conventions,
        },
        all,
    ))
}

fn enumerate_candidates(n: u32, modulus: &Modulus, canonical: bool) -> Vec<ModVector> {
    let m = modulus.value();
    let mut out = Vec::new();
    let mut v = vec![0u64; n as usize];
    loop {
        // Lex-order odometer; skip the zero vector.
        let mut advanced = false;
        for slot in v.iter_mut().rev() {
            *slot += 1;
            if *slot < m {
                advanced = true;
                break;
            }
            *slot = 0;
        }
        if !advanced {
            break;
        }
        if !canonical || class_min_entries(&v, modulus) == v {
            out.push(ModVector::new(v.clone(), modulus.clone()));
        }
    }
    out
}

fn dfs(space: &SearchSpace, state: &mut SearchState, next_u_from: usize) {
    state.stats.visited += 1;
    state.stats.max_depth = state.stats.max_depth.max(state.chosen.len());
    if state.chosen.len() > state.best {
        state.best = state.chosen.len();
        state.best_pairs = state.chosen.clone();
        if space.collect_all {
            state.all_at_best = vec![state.chosen.clone()];
        }
    } else if space.collect_all && !state.chosen.is_empty() && state.chosen.len() == state.best {
        state.all_at_best.push(state.chosen.clone());
    }
    if let Some(cap) = space.global_cap {
        if state.best as u64 >= cap && !space.collect_all {
            return;
        }
    }
    let total = space.candidates.len();
    for u_idx in next_u_from..total {
        // Families extending from here use distinct u's above u_idx only.
        let remaining = total - u_idx;
        let enough = if space.collect_all {
            state.chosen.len() + remaining >= state.best
        } else {
            state.chosen.len() + remaining > state.best
        };
        if !enough {
            state.stats.bound_prunes += 1;
            break;
        }
        'next_v: for v_idx in 0..total {
            if state.used_v[v_idx] || space.dots[u_idx][v_idx] != 0 {
                continue;
            }
            let class = (space.contents[u_idx], space.contents[v_idx]);
            if let Some(&cap) = space.caps.get(&class) {
                if state.class_counts.get(&class).copied().unwrap_or(0) >= cap {
                    state.stats.class_prunes += 1;
                    continue;
                }
            }
            for &(ui, vi) in &state.chosen {
                if !space.s_set.contains(&space.dots[u_idx][vi])
                    || !space.s_set.contains(&space.dots[ui][v_idx])
                {
                    continue 'next_v;
                }
            }
            state.chosen.push((u_idx, v_idx));
            state.used_v[v_idx] = true;
            *state.class_counts.entry(class).or_insert(0) += 1;
            dfs(space, state, u_idx + 1);
            *state.class_counts.get_mut(&class).unwrap() -= 1;
            state.used_v[v_idx] = false;
            state.chosen.pop();
        }
    }
}
