//! Finite presentations and their concrete realization as multiplication
//! tables.
//!
//! Presentation files are UTF-8 text. A `gens:` line declares the ordered
//! generators, then each `rel:` line holds a word or a chain of equalities:
//!
//! ```text
//! # quaternion group
//! gens: a b
//! rel: a^4
//! rel: a^2 b^-2
//! rel: b^-1 a^-1 b a^-1
//! ```
//!
//! Word grammar: `factor := NAME | NAME '^' INT | '(' word ')' '^' INT |
//! '[' word ',' word ']' | '1'`; juxtaposition is the product, INT is a
//! nonzero signed decimal, whitespace is insignificant, `#` starts a
//! comment and `;` separates statements within a line. The commutator
//! convention is `[u,v] = u^-1 v^-1 u v`. A chain `u = v = w = 1` turns
//! each non-identity term into a relator; a chain with no identity term
//! contributes the relator `u_i u_j^-1` for every pair `i < j`.

mod builtins;
mod parser;
mod todd_coxeter;

pub use builtins::{builtin_presentation, BuiltinKey};
pub use parser::ParseError;
pub use todd_coxeter::{todd_coxeter, TcError};

use std::fmt;

use crate::group::{self, ElemId, FiniteGroup};

/// A word in the generators, kept in parsed form so it can be re-printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(pub Vec<Factor>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// `NAME` or `NAME^INT`.
    Gen { gen: usize, exp: i64 },
    /// `( word )^INT`.
    Grouped { word: Word, exp: i64 },
    /// `[ word , word ] = left^-1 right^-1 left right`.
    Comm { left: Word, right: Word },
    /// The literal identity `1`.
    One,
}

impl Word {
    pub fn one() -> Self {
        Word(vec![Factor::One])
    }

    /// Flat form: generator/exponent pairs with grouping, commutators and
    /// identity literals expanded away. No free cancellation is applied.
    pub fn expand(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        self.expand_into(&mut out, false);
        out
    }

    fn expand_into(&self, out: &mut Vec<(usize, i64)>, invert: bool) {
        if invert {
            for f in self.0.iter().rev() {
                f.expand_into(out, true);
            }
        } else {
            for f in &self.0 {
                f.expand_into(out, false);
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.expand().is_empty()
    }

    fn display(&self, names: &[String]) -> String {
        self.0.iter().map(|f| f.display(names)).collect::<Vec<_>>().join(" ")
    }
}

impl Factor {
    fn expand_into(&self, out: &mut Vec<(usize, i64)>, invert: bool) {
        match self {
            Factor::Gen { gen, exp } => {
                let e = if invert { -exp } else { *exp };
                out.push((*gen, e));
            }
            Factor::Grouped { word, exp } => {
                let e = if invert { -exp } else { *exp };
                let flip = e < 0;
                for _ in 0..e.unsigned_abs() {
                    word.expand_into(out, flip);
                }
            }
            Factor::Comm { left, right } => {
                if invert {
                    // [u,v]^-1 = v^-1 u^-1 v u
                    right.expand_into(out, true);
                    left.expand_into(out, true);
                    right.expand_into(out, false);
                    left.expand_into(out, false);
                } else {
                    left.expand_into(out, true);
                    right.expand_into(out, true);
                    left.expand_into(out, false);
                    right.expand_into(out, false);
                }
            }
            Factor::One => {}
        }
    }

    fn display(&self, names: &[String]) -> String {
        match self {
            Factor::Gen { gen, exp: 1 } => names[*gen].clone(),
            Factor::Gen { gen, exp } => format!("{}^{}", names[*gen], exp),
            Factor::Grouped { word, exp } => format!("({})^{}", word.display(names), exp),
            Factor::Comm { left, right } => {
                format!("[{},{}]", left.display(names), right.display(names))
            }
            Factor::One => "1".to_string(),
        }
    }
}

/// A normalized finite presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    flat: Vec<Vec<(usize, i64)>>,
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parser::parse_presentation(text)
    }

    /// Builds a presentation from parts, normalizing and validating.
    pub fn from_words(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, ParseError> {
        let mut flat = Vec::with_capacity(relators.len());
        for w in &relators {
            let f = w.expand();
            if f.is_empty() {
                return Err(ParseError::at(0, 0, "relator reduces to the empty word"));
            }
            for &(g, _) in &f {
                if g >= generators.len() {
                    return Err(ParseError::at(0, 0, "relator uses an undeclared generator"));
                }
            }
            flat.push(f);
        }
        Ok(Presentation { generators, relators, flat })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn flat_relators(&self) -> &[Vec<(usize, i64)>] {
        &self.flat
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display(&self.generators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.generators.join(" "))?;
        for w in &self.relators {
            writeln!(f, "rel: {}", w.display(&self.generators))?;
        }
        Ok(())
    }
}

/// Evaluates every relator at the candidate generator images; true iff all
/// come out to the identity. `images` must match the generator count.
pub fn satisfies_relators<G: FiniteGroup + ?Sized>(
    g: &G,
    images: &[ElemId],
    pres: &Presentation,
) -> bool {
    assert_eq!(
        images.len(),
        pres.generator_count(),
        "image tuple arity does not match the presentation"
    );
    let e = g.identity();
    pres.flat_relators().iter().all(|rel| eval_flat(g, images, rel) == e)
}

pub(crate) fn eval_flat<G: FiniteGroup + ?Sized>(
    g: &G,
    images: &[ElemId],
    rel: &[(usize, i64)],
) -> ElemId {
    let mut acc = g.identity();
    for &(gen, exp) in rel {
        acc = g.mul(acc, group::pow(g, images[gen], exp));
    }
    acc
}

/// Largest order for which a full multiplication table is materialized.
pub const TABLE_CAP: usize = 4096;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("order {0} exceeds the multiplication-table cap {1}")]
    TooLarge(usize, usize),
    #[error("multiplication table is not a Latin square at row {0}")]
    NotLatin(ElemId),
    #[error("identity row or column is not the identity map at {0}")]
    BadIdentity(ElemId),
    #[error("inverse table inconsistent at {0}")]
    BadInverse(ElemId),
    #[error("designated generators generate a proper subgroup of order {0}")]
    NotGenerating(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(ElemId, ElemId, ElemId),
}

/// A finite group held as an explicit multiplication table. Identity has
/// index 0; `parents` records a BFS spanning tree over generator actions,
/// giving each element a canonical word in the generators.
pub struct TableGroup {
    n: usize,
    table: Vec<ElemId>,
    inv: Vec<ElemId>,
    gens: Vec<ElemId>,
    gen_names: Vec<String>,
    /// `(parent, col)` per element; col encodes generator `col >> 1` with
    /// direction `col & 1` (1 = inverse). Element 0 is the BFS root.
    parents: Vec<(ElemId, u8)>,
}

impl TableGroup {
    /// Builds from a raw multiplication function, checking the table
    /// axioms (Latin square, identity at 0, inverses, generation).
    pub fn from_mul_fn(
        n: usize,
        gens: Vec<ElemId>,
        gen_names: Vec<String>,
        mul: impl Fn(ElemId, ElemId) -> ElemId,
    ) -> Result<Self, TableError> {
        if n > TABLE_CAP {
            return Err(TableError::TooLarge(n, TABLE_CAP));
        }
        let mut table = vec![0 as ElemId; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = mul(i as ElemId, j as ElemId);
            }
        }
        Self::from_table(n, table, gens, gen_names)
    }

    pub fn from_table(
        n: usize,
        table: Vec<ElemId>,
        gens: Vec<ElemId>,
        gen_names: Vec<String>,
    ) -> Result<Self, TableError> {
        if n > TABLE_CAP {
            return Err(TableError::TooLarge(n, TABLE_CAP));
        }
        assert_eq!(table.len(), n * n);
        let mut inv = vec![ElemId::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if table[i * n + j] == 0 {
                    inv[i] = j as ElemId;
                    break;
                }
            }
        }
        let parents = bfs_parents(n, &table, &gens);
        let g = TableGroup { n, table, inv, gens, gen_names, parents };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), TableError> {
        let n = self.n;
        // Identity row and column.
        for i in 0..n as ElemId {
            if self.mul(0, i) != i || self.mul(i, 0) != i {
                return Err(TableError::BadIdentity(i));
            }
        }
        // Latin square: rows and columns are permutations.
        let mut seen_row = vec![false; n];
        let mut seen_col = vec![false; n];
        for i in 0..n {
            seen_row.iter_mut().for_each(|s| *s = false);
            seen_col.iter_mut().for_each(|s| *s = false);
            for j in 0..n {
                let r = self.table[i * n + j] as usize;
                let c = self.table[j * n + i] as usize;
                if seen_row[r] || seen_col[c] {
                    return Err(TableError::NotLatin(i as ElemId));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        // Inverses both ways.
        for i in 0..n as ElemId {
            let j = self.inv[i as usize];
            if j == ElemId::MAX || self.mul(i, j) != 0 || self.mul(j, i) != 0 {
                return Err(TableError::BadInverse(i));
            }
        }
        // Designated generators generate.
        let span = group::closure(self, &self.gens);
        if span.order() != n {
            return Err(TableError::NotGenerating(span.order()));
        }
        Ok(())
    }

    /// Associativity check; exhaustive up to 1024 elements, else on the
    /// given number of seeded triples.
    pub fn check_associativity(&self, seed: u64, samples: u64) -> Result<(), TableError> {
        let n = self.n;
        if n <= 1024 {
            for x in 0..n {
                let row_x = &self.table[x * n..(x + 1) * n];
                for y in 0..n {
                    let xy = row_x[y] as usize;
                    let row_xy = &self.table[xy * n..(xy + 1) * n];
                    let row_y = &self.table[y * n..(y + 1) * n];
                    for z in 0..n {
                        if row_xy[z] != row_x[row_y[z] as usize] {
                            return Err(TableError::NotAssociative(
                                x as ElemId,
                                y as ElemId,
                                z as ElemId,
                            ));
                        }
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let x = rng.gen_range(0..n as ElemId);
                let y = rng.gen_range(0..n as ElemId);
                let z = rng.gen_range(0..n as ElemId);
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                    return Err(TableError::NotAssociative(x, y, z));
                }
            }
        }
        Ok(())
    }

    pub fn direct_product(a: &TableGroup, b: &TableGroup) -> Result<TableGroup, TableError> {
        let n = a.n * b.n;
        let (an, bn) = (a.n as ElemId, b.n as ElemId);
        let mut gens = Vec::new();
        let mut gen_names = Vec::new();
        for (i, &g) in a.gens.iter().enumerate() {
            gens.push(g * bn);
            gen_names.push(a.gen_names.get(i).cloned().unwrap_or_else(|| format!("a{i}")));
        }
        for (i, &g) in b.gens.iter().enumerate() {
            gens.push(g);
            let name = b.gen_names.get(i).cloned().unwrap_or_else(|| format!("b{i}"));
            gen_names.push(format!("{name}'"));
        }
        let _ = an;
        TableGroup::from_mul_fn(n, gens, gen_names, |x, y| {
            let (xa, xb) = (x / bn, x % bn);
            let (ya, yb) = (y / bn, y % bn);
            a.mul(xa, ya) * bn + b.mul(xb, yb)
        })
    }

    pub fn parents(&self) -> &[(ElemId, u8)] {
        &self.parents
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    /// The canonical word of an element along the BFS tree, as
    /// (generator, exponent sign) letters from left to right.
    pub fn element_word(&self, mut e: ElemId) -> Vec<(usize, i64)> {
        let mut letters = Vec::new();
        while e != 0 {
            let (p, col) = self.parents[e as usize];
            let gen = (col >> 1) as usize;
            let exp = if col & 1 == 0 { 1 } else { -1 };
            letters.push((gen, exp));
            e = p;
        }
        letters.reverse();
        // Compress adjacent same-generator letters.
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, s) in letters {
            match out.last_mut() {
                Some((lg, le)) if *lg == g && (*le > 0) == (s > 0) => *le += s,
                _ => out.push((g, s)),
            }
        }
        out
    }
}

fn bfs_parents(n: usize, table: &[ElemId], gens: &[ElemId]) -> Vec<(ElemId, u8)> {
    let mut parents = vec![(0 as ElemId, 0u8); n];
    let mut seen = vec![false; n];
    let mut queue = Vec::with_capacity(n);
    seen[0] = true;
    queue.push(0 as ElemId);
    let mut inv_of = |g: ElemId| {
        (0..n as ElemId).find(|&j| table[g as usize * n + j as usize] == 0).unwrap_or(0)
    };
    let gen_cols: Vec<(ElemId, u8)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, &g)| [(g, (i as u8) << 1), (inv_of(g), ((i as u8) << 1) | 1)])
        .collect();
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &(g, col) in &gen_cols {
            let y = table[x as usize * n + g as usize];
            if !seen[y as usize] {
                seen[y as usize] = true;
                parents[y as usize] = (x, col);
                queue.push(y);
            }
        }
    }
    parents
}

impl FiniteGroup for TableGroup {
    fn order(&self) -> usize {
        self.n
    }

    fn identity(&self) -> ElemId {
        0
    }

    fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.table[a as usize * self.n + b as usize]
    }

    fn inv(&self, a: ElemId) -> ElemId {
        self.inv[a as usize]
    }

    fn generators(&self) -> Vec<ElemId> {
        self.gens.clone()
    }

    fn element_label(&self, a: ElemId) -> String {
        if a == 0 {
            return "1".to_string();
        }
        self.element_word(a)
            .into_iter()
            .map(|(g, e)| {
                let name = self.gen_names.get(g).cloned().unwrap_or_else(|| format!("g{g}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_expansion() {
        // [x, y] -> x^-1 y^-1 x y
        let w = Word(vec![Factor::Comm {
            left: Word(vec![Factor::Gen { gen: 0, exp: 1 }]),
            right: Word(vec![Factor::Gen { gen: 1, exp: 1 }]),
        }]);
        assert_eq!(w.expand(), vec![(0, -1), (1, -1), (0, 1), (1, 1)]);

        // (x y)^-2 -> (y^-1 x^-1)^2
        let w = Word(vec![Factor::Grouped {
            word: Word(vec![Factor::Gen { gen: 0, exp: 1 }, Factor::Gen { gen: 1, exp: 1 }]),
            exp: -2,
        }]);
        assert_eq!(w.expand(), vec![(1, -1), (0, -1), (1, -1), (0, -1)]);

        assert!(Word::one().is_identity());
    }

    #[test]
    fn direct_product_of_klein_groups() {
        let klein = TableGroup::from_mul_fn(
            4,
            vec![1, 2],
            vec!["u".into(), "v".into()],
            |a, b| a ^ b,
        )
        .unwrap();
        let prod = TableGroup::direct_product(&klein, &klein).unwrap();
        assert_eq!(prod.order(), 16);
        assert_eq!(group::exponent(&prod).unwrap(), 2);
        prod.check_associativity(1, 0).unwrap();
    }

    #[test]
    fn bad_tables_are_rejected() {
        // A constant row is not a Latin square.
        let table = vec![0, 1, 0, 1];
        assert!(matches!(
            TableGroup::from_table(2, table, vec![1], vec!["x".into()]),
            Err(TableError::NotLatin(_)) | Err(TableError::BadIdentity(_))
        ));
        // C4 with only the square as designated generator does not generate.
        let c4 = |a: ElemId, b: ElemId| (a + b) % 4;
        assert!(matches!(
            TableGroup::from_mul_fn(4, vec![2], vec!["s".into()], c4),
            Err(TableError::NotGenerating(2))
        ));
    }

    #[test]
    fn element_words_follow_the_bfs_tree() {
        let c6 = TableGroup::from_mul_fn(6, vec![1], vec!["x".into()], |a, b| (a + b) % 6).unwrap();
        assert_eq!(c6.element_label(0), "1");
        assert_eq!(c6.element_label(1), "x");
        assert_eq!(c6.element_label(2), "x^2");
        // 5 = x^-1 is one BFS step from the root.
        assert_eq!(c6.element_label(5), "x^-1");
    }
}
