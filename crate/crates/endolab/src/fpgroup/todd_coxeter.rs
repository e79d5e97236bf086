//! HLT-style Todd-Coxeter coset enumeration over the trivial subgroup.
//!
//! Strategy is fixed for reproducibility: cosets are scanned in definition
//! order against the relators in presentation order, gaps are filled
//! first-free (forward along the relator), and coincidences are merged
//! immediately with a union-find keeping the smaller coset id. No
//! lookahead. Given the same presentation the resulting table is
//! bit-identical across runs.

use thiserror::Error;

use super::{Presentation, TableError, TableGroup};
use crate::group::ElemId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TcError {
    #[error("coset enumeration did not close within {max_cosets} cosets ({cosets_defined} defined); the group may be larger or infinite")]
    DidNotClose { cosets_defined: usize, max_cosets: usize },
    #[error("enumeration closed but the table failed validation: {0}")]
    Table(#[from] TableError),
}

const UNDEF: i32 = -1;

#[inline]
fn inv_col(col: usize) -> usize {
    col ^ 1
}

struct Enumerator {
    ncols: usize,
    table: Vec<i32>,
    parent: Vec<u32>,
    live: usize,
    max_cosets: usize,
}

impl Enumerator {
    fn new(ncols: usize, max_cosets: usize) -> Self {
        let mut e = Enumerator { ncols, table: Vec::new(), parent: Vec::new(), live: 0, max_cosets };
        e.parent.push(0);
        e.table.extend(std::iter::repeat(UNDEF).take(ncols));
        e.live = 1;
        e
    }

    fn ncosets(&self) -> usize {
        self.parent.len()
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = self.parent[x as usize];
        }
        x
    }

    fn entry(&mut self, c: u32, col: usize) -> i32 {
        let raw = self.table[c as usize * self.ncols + col];
        if raw < 0 {
            UNDEF
        } else {
            self.find(raw as u32) as i32
        }
    }

    fn set_raw(&mut self, c: u32, col: usize, v: u32) {
        self.table[c as usize * self.ncols + col] = v as i32;
    }

    fn define(&mut self, from: u32, col: usize) -> Result<u32, TcError> {
        if self.ncosets() >= self.max_cosets {
            return Err(TcError::DidNotClose {
                cosets_defined: self.ncosets(),
                max_cosets: self.max_cosets,
            });
        }
        let n = self.ncosets() as u32;
        self.parent.push(n);
        self.table.extend(std::iter::repeat(UNDEF).take(self.ncols));
        self.live += 1;
        self.set_raw(from, col, n);
        self.set_raw(n, inv_col(col), from);
        Ok(n)
    }

    /// Installs `x . col = y` in both directions, queueing a coincidence if
    /// either slot already holds a different coset.
    fn set_edge(&mut self, x: u32, col: usize, y: u32, queue: &mut Vec<(u32, u32)>) {
        let x = self.find(x);
        let y = self.find(y);
        match self.entry(x, col) {
            UNDEF => self.set_raw(x, col, y),
            v if v as u32 != y => queue.push((v as u32, y)),
            _ => {}
        }
        match self.entry(y, inv_col(col)) {
            UNDEF => self.set_raw(y, inv_col(col), x),
            v if v as u32 != x => queue.push((v as u32, x)),
            _ => {}
        }
    }

    /// Merges queued coincident pairs, migrating the dead coset's edges.
    fn drain(&mut self, queue: &mut Vec<(u32, u32)>) {
        while let Some((a, b)) = queue.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, kill) = if a < b { (a, b) } else { (b, a) };
            self.parent[kill as usize] = keep;
            self.live -= 1;
            for col in 0..self.ncols {
                let raw = self.table[kill as usize * self.ncols + col];
                if raw < 0 {
                    continue;
                }
                let target = self.find(raw as u32);
                self.set_edge(keep, col, target, queue);
            }
        }
    }

    fn coincide(&mut self, a: u32, b: u32) {
        let mut queue = vec![(a, b)];
        self.drain(&mut queue);
    }

    /// Scans the relator from `alpha`, defining cosets to fill the gap and
    /// closing the final edge as a deduction. On return the trace closes.
    fn scan_and_fill(&mut self, alpha: u32, rel: &[usize]) -> Result<(), TcError> {
        loop {
            let a = self.find(alpha);
            let mut f = a;
            let mut i = 0;
            while i < rel.len() {
                match self.entry(f, rel[i]) {
                    UNDEF => break,
                    v => {
                        f = v as u32;
                        i += 1;
                    }
                }
            }
            if i == rel.len() {
                if f != a {
                    self.coincide(f, a);
                }
                return Ok(());
            }
            let mut b = a;
            let mut j = rel.len();
            while j > i + 1 {
                match self.entry(b, inv_col(rel[j - 1])) {
                    UNDEF => break,
                    v => {
                        b = v as u32;
                        j -= 1;
                    }
                }
            }
            if i + 1 == j {
                let mut queue = Vec::new();
                self.set_edge(f, rel[i], b, &mut queue);
                self.drain(&mut queue);
                return Ok(());
            }
            // Gap longer than one edge: define the next coset forward and
            // rescan (relators here are short, so the rescan is cheap).
            self.define(f, rel[i])?;
        }
    }
}

/// Runs coset enumeration and materializes the resulting group as a
/// multiplication table. Deterministic for a given presentation.
pub fn todd_coxeter(pres: &Presentation, max_cosets: usize) -> Result<TableGroup, TcError> {
    let ngens = pres.generator_count();
    let ncols = 2 * ngens;
    let rels: Vec<Vec<usize>> = pres
        .flat_relators()
        .iter()
        .map(|flat| {
            let mut letters = Vec::new();
            for &(g, e) in flat {
                let col = 2 * g + usize::from(e < 0);
                letters.extend(std::iter::repeat(col).take(e.unsigned_abs() as usize));
            }
            letters
        })
        .collect();

    let mut e = Enumerator::new(ncols, max_cosets.max(1));
    let mut alpha: u32 = 0;
    while (alpha as usize) < e.ncosets() {
        if e.find(alpha) == alpha {
            for rel in &rels {
                e.scan_and_fill(alpha, rel)?;
                if e.find(alpha) != alpha {
                    break;
                }
            }
            if e.find(alpha) == alpha {
                for col in 0..ncols {
                    if e.entry(alpha, col) == UNDEF {
                        e.define(alpha, col)?;
                    }
                }
            }
        }
        alpha += 1;
    }

    // Compact live cosets in ascending id order.
    let ncosets = e.ncosets() as u32;
    let live: Vec<u32> = (0..ncosets).filter(|&c| e.find(c) == c).collect();
    let n = live.len();
    let mut new_id = vec![u32::MAX; ncosets as usize];
    for (idx, &c) in live.iter().enumerate() {
        new_id[c as usize] = idx as u32;
    }
    let mut action = vec![0 as ElemId; n * ncols];
    for (idx, &c) in live.iter().enumerate() {
        for col in 0..ncols {
            let raw = e.entry(c, col);
            debug_assert!(raw >= 0, "closed table has undefined entry");
            action[idx * ncols + col] = new_id[raw as usize];
        }
    }

    if n > super::TABLE_CAP {
        return Err(TcError::Table(TableError::TooLarge(n, super::TABLE_CAP)));
    }

    // Multiplication table column by column in BFS discovery order: with
    // element j discovered as j0 . col, the column of j is the column of
    // j0 pushed through the action of col.
    let mut order_of_discovery = Vec::with_capacity(n);
    let mut via = vec![(0u32, 0usize); n];
    let mut seen = vec![false; n];
    seen[0] = true;
    order_of_discovery.push(0u32);
    let mut head = 0;
    while head < order_of_discovery.len() {
        let x = order_of_discovery[head];
        head += 1;
        for col in 0..ncols {
            let y = action[x as usize * ncols + col];
            if !seen[y as usize] {
                seen[y as usize] = true;
                via[y as usize] = (x, col);
                order_of_discovery.push(y);
            }
        }
    }
    debug_assert_eq!(order_of_discovery.len(), n, "generators act transitively on cosets");

    let mut table = vec![0 as ElemId; n * n];
    for i in 0..n {
        table[i * n] = i as ElemId;
    }
    for &j in order_of_discovery.iter().skip(1) {
        let (j0, col) = via[j as usize];
        for i in 0..n {
            let base = table[i * n + j0 as usize];
            table[i * n + j as usize] = action[base as usize * ncols + col];
        }
    }

    let gens: Vec<ElemId> = (0..ngens).map(|g| action[2 * g]).collect();
    let names = pres.generator_names().to_vec();
    Ok(TableGroup::from_table(n, table, gens, names)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{self, FiniteGroup};

    fn order_of(text: &str, max: usize) -> usize {
        let pres = Presentation::parse(text).unwrap();
        todd_coxeter(&pres, max).unwrap().order()
    }

    #[test]
    fn small_known_orders() {
        assert_eq!(order_of("gens: x y; rel: [x,y] = 1; rel: x^2 = 1; rel: y^2 = 1", 100), 4);
        assert_eq!(order_of("gens: x; rel: x^12", 100), 12);
        assert_eq!(order_of("gens: a b; rel: a^3; rel: b^2; rel: (a b)^2", 100), 6);
        assert_eq!(order_of("gens: x; rel: x", 100), 1);
    }

    #[test]
    fn quaternion_group_has_order_eight_and_the_right_shape() {
        let pres =
            Presentation::parse("gens: a b; rel: a^4; rel: a^2 b^-2; rel: b^-1 a^-1 b a^-1")
                .unwrap();
        let q8 = todd_coxeter(&pres, 1000).unwrap();
        assert_eq!(q8.order(), 8);
        q8.check_associativity(0, 0).unwrap();
        // Fingerprint of Q8 among order-8 groups: one involution, six
        // elements of order 4, center of order 2.
        let mut hist = std::collections::BTreeMap::new();
        for x in 0..8 {
            *hist.entry(group::element_order(&q8, x)).or_insert(0usize) += 1;
        }
        assert_eq!(hist, [(1u64, 1usize), (2, 1), (4, 6)].into_iter().collect());
        assert_eq!(group::center(&q8).unwrap().order(), 2);
        assert_eq!(group::derived_subgroup(&q8).unwrap().order(), 2);
    }

    #[test]
    fn free_and_infinite_presentations_do_not_close() {
        let free = Presentation::parse("gens: x y; rel: x^2 = 1").unwrap();
        match todd_coxeter(&free, 500) {
            Err(TcError::DidNotClose { cosets_defined, max_cosets }) => {
                assert_eq!(max_cosets, 500);
                assert!(cosets_defined >= 500);
            }
            other => panic!("expected DidNotClose, got order {:?}", other.map(|g| g.order())),
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let pres =
            Presentation::parse("gens: a b; rel: a^4; rel: a^2 b^-2; rel: b^-1 a^-1 b a^-1")
                .unwrap();
        let g1 = todd_coxeter(&pres, 1000).unwrap();
        let g2 = todd_coxeter(&pres, 1000).unwrap();
        assert_eq!(g1.order(), g2.order());
        let n = g1.order() as u32;
        for i in 0..n {
            for j in 0..n {
                assert_eq!(g1.mul(i, j), g2.mul(i, j));
            }
        }
    }

    #[test]
    fn coincidence_heavy_presentation_collapses() {
        // x^2 = x^3 forces x = 1.
        assert_eq!(order_of("gens: x; rel: x^2 = x^3", 100), 1);
        // A redundant chain still enumerates correctly.
        assert_eq!(order_of("gens: x y; rel: x^2 = y^2 = (x y)^2; rel: x^4", 1000), 8);
    }
}
