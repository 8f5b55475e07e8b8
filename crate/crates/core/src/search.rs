//! Exact-cover search for tilings of `Z^d` by cosets whose lattices contain
//! `P Z^d`, optionally requiring pairwise distinct lattices.
//!
//! The ground set is the torus `(Z/P)^d`. Each candidate coset covers
//! `P^d / index` cells; a tiling is a set of candidates covering every cell
//! exactly once. Descent always branches on the uncovered cell with the fewest
//! admissible candidates.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::coset::{make_coset, Coset};
use crate::error::{Error, Result};
use crate::exec::{map_collect, Execution};
use crate::lattice::Lattice;
use crate::tiling::{verify_tiling_torus, TilingInstance};

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;
pub const DEFAULT_CANDIDATE_CAP: usize = 200_000;
pub const DEFAULT_SEARCH_TORUS_BUDGET: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub dim: usize,
    /// Side of the search torus.
    pub period: u64,
    pub max_index: u64,
    pub max_tiles: usize,
    pub require_distinct_lattices: bool,
    /// Deduplicate solutions up to coordinate permutations and translations.
    pub symmetry_reduction: bool,
    /// Restrict candidates to Cartesian lattices.
    pub cartesian_only: bool,
    pub node_budget: u64,
    pub candidate_cap: usize,
    pub torus_budget: u64,
    pub execution: Execution,
}

impl SearchConfig {
    /// Unrestricted search on `(Z/period)^dim`: every index up to `period^dim`,
    /// any number of tiles, repeated lattices allowed.
    pub fn new(dim: usize, period: u64) -> Self {
        let cells = period.checked_pow(dim as u32).unwrap_or(u64::MAX);
        Self {
            dim,
            period,
            max_index: cells,
            max_tiles: usize::try_from(cells).unwrap_or(usize::MAX),
            require_distinct_lattices: false,
            symmetry_reduction: false,
            cartesian_only: false,
            node_budget: DEFAULT_NODE_BUDGET,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            torus_budget: DEFAULT_SEARCH_TORUS_BUDGET,
            execution: Execution::default(),
        }
    }

    fn cells(&self) -> Result<usize> {
        if self.dim == 0 {
            return Err(Error::BadDimension {
                dim: 0,
                reason: "search needs dimension at least 1",
            });
        }
        if self.period == 0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        match self.period.checked_pow(self.dim as u32) {
            Some(n) if n <= self.torus_budget => Ok(n as usize),
            _ => Err(Error::TorusTooLarge {
                points: num_traits::pow(BigInt::from(self.period), self.dim).to_string(),
                budget: self.torus_budget,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub tilings: Vec<TilingInstance>,
    pub nodes_explored: u64,
    /// The whole search space was covered; `false` means the node budget ran
    /// out and `tilings` may be incomplete.
    pub exhausted: bool,
}

/// All sublattices `L` with `P Z^d ⊆ L` and index at most `max_index`, in
/// Hermite form, sorted.
pub fn enumerate_sublattices(cfg: &SearchConfig) -> Result<Vec<Lattice>> {
    let d = cfg.dim;
    if d == 0 || cfg.period == 0 {
        return Err(Error::InvalidArgument(
            "search needs positive dimension and period".into(),
        ));
    }
    let p = BigInt::from(cfg.period);
    let divisors: Vec<u64> = (1..=cfg.period)
        .filter(|k| cfg.period.is_multiple_of(*k))
        .collect();
    let mut out = Vec::new();
    let mut diag = vec![0u64; d];
    enumerate_diagonals(&divisors, cfg.max_index, 0, 1, &mut diag, &mut |diag| {
        // entries above the diagonal range over [0, diag[j])
        let slots: Vec<(usize, usize)> = (0..d).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let ranges: Vec<Vec<u64>> = slots.iter().map(|&(_, j)| (0..diag[j]).collect()).collect();
        let fillings: Box<dyn Iterator<Item = Vec<u64>>> = if slots.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(ranges.into_iter().multi_cartesian_product())
        };
        for filling in fillings {
            let mut rows = vec![vec![0u64; d]; d];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = diag[i];
            }
            for (&(i, j), &v) in slots.iter().zip(&filling) {
                rows[i][j] = v;
            }
            let lat = Lattice::from_generators(rows, d).expect("nonsingular triangular basis");
            if lat.contains_scaled_unit_lattice(&p) && (!cfg.cartesian_only || lat.is_cartesian()) {
                out.push(lat);
            }
            if out.len() > cfg.candidate_cap {
                return Err(Error::BudgetExceeded {
                    what: format!("more than {} candidate lattices", cfg.candidate_cap),
                });
            }
        }
        Ok(())
    })?;
    out.sort();
    Ok(out)
}

fn enumerate_diagonals(
    divisors: &[u64],
    max_index: u64,
    i: usize,
    index: u64,
    diag: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    if i == diag.len() {
        return visit(diag);
    }
    for &a in divisors {
        match index.checked_mul(a) {
            Some(next) if next <= max_index => {
                diag[i] = a;
                enumerate_diagonals(divisors, max_index, i + 1, next, diag, visit)?;
            }
            _ => break,
        }
    }
    Ok(())
}

/// Every coset of every admissible sublattice, sorted by (index, lattice,
/// representative).
pub fn enumerate_candidate_cosets(cfg: &SearchConfig) -> Result<Vec<Coset>> {
    let mut out = Vec::new();
    for lat in enumerate_sublattices(cfg)? {
        let ranges: Vec<Vec<BigInt>> = (0..cfg.dim)
            .map(|i| {
                let n = lat
                    .diagonal(i)
                    .to_u64()
                    .expect("diagonal divides the period");
                (0..n).map(BigInt::from).collect()
            })
            .collect();
        for rep in ranges.into_iter().multi_cartesian_product() {
            out.push(make_coset(&lat, &rep)?);
            if out.len() > cfg.candidate_cap {
                return Err(Error::BudgetExceeded {
                    what: format!("more than {} candidate cosets", cfg.candidate_cap),
                });
            }
        }
    }
    Ok(out)
}

/// Bit set over torus cells.
#[derive(Clone)]
struct CellSet(Vec<u64>);

impl CellSet {
    fn empty(n: usize) -> Self {
        CellSet(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn disjoint(&self, other: &CellSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }

    fn union_with(&mut self, other: &CellSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn remove_all(&mut self, other: &CellSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}

struct Problem {
    cells: usize,
    masks: Vec<CellSet>,
    lattice_id: Vec<usize>,
    lattice_count: usize,
    by_cell: Vec<Vec<usize>>,
    max_tiles: usize,
    distinct: bool,
    node_budget: u64,
}

struct State {
    covered: CellSet,
    covered_count: usize,
    used_lattice: Vec<bool>,
    chosen: Vec<usize>,
}

struct Shared<'a> {
    nodes: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

impl Problem {
    fn admissible(&self, st: &State, cand: usize) -> bool {
        (!self.distinct || !st.used_lattice[self.lattice_id[cand]])
            && self.masks[cand].disjoint(&st.covered)
    }

    /// Uncovered cell with fewest admissible candidates, and those candidates.
    fn branch(&self, st: &State) -> Option<(usize, Vec<usize>)> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for cell in 0..self.cells {
            if st.covered.contains(cell) {
                continue;
            }
            let opts: Vec<usize> = self.by_cell[cell]
                .iter()
                .copied()
                .filter(|&c| self.admissible(st, c))
                .collect();
            if best.as_ref().is_none_or(|(_, b)| opts.len() < b.len()) {
                let done = opts.is_empty();
                best = Some((cell, opts));
                if done {
                    break;
                }
            }
        }
        best
    }

    fn apply(&self, st: &mut State, cand: usize) {
        st.covered.union_with(&self.masks[cand]);
        st.covered_count += self.cells_of(cand);
        st.used_lattice[self.lattice_id[cand]] = true;
        st.chosen.push(cand);
    }

    fn undo(&self, st: &mut State, cand: usize) {
        st.covered.remove_all(&self.masks[cand]);
        st.covered_count -= self.cells_of(cand);
        st.used_lattice[self.lattice_id[cand]] = false;
        st.chosen.pop();
    }

    fn cells_of(&self, cand: usize) -> usize {
        self.masks[cand]
            .0
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Counts this node; false once the budget is spent.
    fn enter(&self, shared: &Shared) -> bool {
        if shared.aborted.load(Ordering::Relaxed) {
            return false;
        }
        let n = shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.node_budget {
            shared.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn dfs(&self, st: &mut State, shared: &Shared, out: &mut Vec<Vec<usize>>) {
        if !self.enter(shared) {
            return;
        }
        self.expand(st, shared, out);
    }

    fn expand(&self, st: &mut State, shared: &Shared, out: &mut Vec<Vec<usize>>) {
        if st.covered_count == self.cells {
            if st.chosen.len() >= 2 {
                out.push(st.chosen.clone());
            }
            return;
        }
        if st.chosen.len() >= self.max_tiles {
            return;
        }
        let Some((_, opts)) = self.branch(st) else {
            return;
        };
        for cand in opts {
            self.apply(st, cand);
            self.dfs(st, shared, out);
            self.undo(st, cand);
            if shared.aborted.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn fresh_state(&self) -> State {
        State {
            covered: CellSet::empty(self.cells),
            covered_count: 0,
            used_lattice: vec![false; self.lattice_count],
            chosen: Vec::new(),
        }
    }
}

fn cell_index(x: &[BigInt], p: u64) -> usize {
    x.iter().fold(0usize, |acc, c| {
        acc * p as usize + c.to_usize().expect("torus coordinate")
    })
}

fn build_problem(cfg: &SearchConfig, candidates: &[Coset]) -> Result<Problem> {
    let cells = cfg.cells()?;
    let p = cfg.period;
    let full = Lattice::full(cfg.dim);
    let mut lattice_ids: BTreeMap<&Lattice, usize> = BTreeMap::new();
    let mut masks = Vec::with_capacity(candidates.len());
    let mut lattice_id = Vec::with_capacity(candidates.len());
    let mut by_cell = vec![Vec::new(); cells];
    let axes: Vec<Vec<BigInt>> = (0..cfg.dim)
        .map(|_| (0..p).map(BigInt::from).collect())
        .collect();
    let points: Vec<Vec<BigInt>> = axes.into_iter().multi_cartesian_product().collect();
    for (ci, c) in candidates.iter().enumerate() {
        let mut mask = CellSet::empty(cells);
        // the single-tile family is never a solution; skipping Z^d keeps it out
        if *c.lattice() != full {
            for x in &points {
                if c.contains(x) {
                    let cell = cell_index(x, p);
                    mask.insert(cell);
                    by_cell[cell].push(ci);
                }
            }
        }
        let next = lattice_ids.len();
        lattice_id.push(*lattice_ids.entry(c.lattice()).or_insert(next));
        masks.push(mask);
    }
    Ok(Problem {
        cells,
        masks,
        lattice_id,
        lattice_count: lattice_ids.len(),
        by_cell,
        max_tiles: cfg.max_tiles,
        distinct: cfg.require_distinct_lattices,
        node_budget: cfg.node_budget,
    })
}

/// Runs the exact-cover search. Solutions are re-verified on the torus,
/// canonicalized, deduplicated, and sorted.
pub fn search_exotic_tilings(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.cells()?;
    let candidates = enumerate_candidate_cosets(cfg)?;
    let problem = build_problem(cfg, &candidates)?;
    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let shared = Shared {
        nodes: &nodes,
        aborted: &aborted,
    };

    let mut raw = Vec::new();
    let mut root = problem.fresh_state();
    if problem.enter(&shared) {
        if problem.cells == 0 || problem.max_tiles == 0 {
            problem.expand(&mut root, &shared, &mut raw);
        } else if let Some((_, opts)) = problem.branch(&root) {
            // root branches are independent sub-searches
            let per_branch = map_collect(cfg.execution, &opts, |&cand| {
                let mut st = problem.fresh_state();
                let mut found = Vec::new();
                problem.apply(&mut st, cand);
                problem.dfs(&mut st, &shared, &mut found);
                found
            });
            raw.extend(per_branch.into_iter().flatten());
        }
    }
    let exhausted = !aborted.load(Ordering::Relaxed);

    let mut tilings = BTreeSet::new();
    for sol in raw {
        let inst = TilingInstance::new(sol.iter().map(|&i| candidates[i].clone()).collect())?;
        let report = verify_tiling_torus(&inst)?;
        assert!(report.is_tiling, "search produced a non-tiling: {inst:?}");
        if cfg.require_distinct_lattices {
            assert!(
                report.distinct_lattices,
                "search produced a translate pair: {inst:?}"
            );
        }
        tilings.insert(canonicalize_solution(&inst, cfg.symmetry_reduction)?);
    }
    Ok(SearchResult {
        tilings: tilings.into_iter().collect(),
        nodes_explored: nodes.load(Ordering::Relaxed).min(cfg.node_budget),
        exhausted,
    })
}

/// Sorts the tiles; with `use_symmetry`, returns the least sorted image under
/// all coordinate permutations and translations modulo the period.
pub fn canonicalize_solution(t: &TilingInstance, use_symmetry: bool) -> Result<TilingInstance> {
    if !use_symmetry {
        return Ok(t.sorted());
    }
    let d = t.dim();
    let p = t
        .period()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("period too large for symmetry reduction".into()))?;
    let shifts: Vec<Vec<BigInt>> = (0..d)
        .map(|_| (0..p).map(BigInt::from).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect();
    let mut best: Option<TilingInstance> = None;
    for perm in (0..d).permutations(d) {
        let permuted: Vec<Coset> = t
            .tiles()
            .iter()
            .map(|c| c.permute_coordinates(&perm))
            .collect::<Result<_>>()?;
        for shift in &shifts {
            let moved: Vec<Coset> = permuted
                .iter()
                .map(|c| c.translate(shift))
                .collect::<Result<_>>()?;
            let image = TilingInstance::new(moved)?.sorted();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        }
    }
    Ok(best.expect("at least the identity symmetry"))
}

/// Brute force over all candidate subsets; only for tiny configurations.
#[doc(hidden)]
pub fn brute_force_solution_count(cfg: &SearchConfig) -> Result<usize> {
    let candidates: Vec<Coset> = enumerate_candidate_cosets(cfg)?
        .into_iter()
        .filter(|c| *c.index() != BigInt::from(1))
        .collect();
    assert!(
        candidates.len() <= 24,
        "brute force limited to 24 candidates"
    );
    let cells = cfg.cells()?;
    let p = cfg.period;
    let points: Vec<Vec<BigInt>> = (0..cfg.dim)
        .map(|_| (0..p).map(BigInt::from).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect();
    let mut count = 0;
    for subset in 1u32..(1 << candidates.len()) {
        let chosen: Vec<&Coset> = (0..candidates.len())
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| &candidates[i])
            .collect();
        if chosen.len() < 2 || chosen.len() > cfg.max_tiles {
            continue;
        }
        if cfg.require_distinct_lattices
            && chosen
                .iter()
                .tuple_combinations()
                .any(|(a, b)| a.lattice() == b.lattice())
        {
            continue;
        }
        let exact = points
            .iter()
            .all(|x| chosen.iter().filter(|c| c.contains(x)).count() == 1);
        if exact {
            count += 1;
        }
    }
    debug_assert_eq!(points.len(), cells);
    Ok(count)
}
