//! Finitely presented groups: presentations with labeled generators,
//! abelianization via Smith normal form, bounded Todd-Coxeter coset
//! enumeration, and bounded Tietze simplification that keeps every original
//! symbol expressible in the surviving generators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cog::ComplexOfGroups;
use crate::error::FpError;
use crate::perm::{Perm, PermGroup};

/// A word: nonzero signed 1-based generator indices, multiplied left to
/// right.
pub type Word = Vec<i64>;

pub fn word_inverse(w: &[i64]) -> Word {
    w.iter().rev().map(|&s| -s).collect()
}

pub fn free_reduce(w: &[i64]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &s in w {
        debug_assert!(s != 0);
        if let Some(&last) = out.last() {
            if last == -s {
                out.pop();
                continue;
            }
        }
        out.push(s);
    }
    out
}

/// Substitutes `replacement` for generator `gen` (1-based) throughout `w`.
pub fn substitute(w: &[i64], gen: i64, replacement: &[i64]) -> Word {
    debug_assert!(gen > 0);
    let mut out = Vec::new();
    for &s in w {
        if s == gen {
            out.extend_from_slice(replacement);
        } else if s == -gen {
            out.extend(word_inverse(replacement));
        } else {
            out.push(s);
        }
    }
    free_reduce(&out)
}

/// Where a presentation generator came from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenLabel {
    /// A non-identity element of the local group at a vertex.
    Vertex { vertex: String, element: Vec<usize> },
    /// The positively oriented edge symbol.
    Edge { edge: String },
    /// A free-standing name (hand-built presentations).
    Named(String),
}

impl GenLabel {
    pub fn display(&self) -> String {
        match self {
            GenLabel::Vertex { vertex, element } => {
                let imgs: Vec<String> = element.iter().map(|x| x.to_string()).collect();
                format!("g[{vertex}|{}]", imgs.join("."))
            }
            GenLabel::Edge { edge } => format!("e[{edge}]"),
            GenLabel::Named(n) => n.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    labels: Vec<GenLabel>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(labels: Vec<GenLabel>, relators: Vec<Word>) -> Self {
        let relators = relators.iter().map(|w| free_reduce(w)).collect();
        Presentation { labels, relators }
    }

    /// Convenience constructor with named generators.
    pub fn named(gens: &[&str], relators: Vec<Word>) -> Self {
        Presentation::new(
            gens.iter()
                .map(|g| GenLabel::Named(g.to_string()))
                .collect(),
            relators,
        )
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[GenLabel] {
        &self.labels
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn index_of(&self, label: &GenLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn with_extra_relators(&self, extra: Vec<Word>) -> Presentation {
        let mut relators = self.relators.clone();
        relators.extend(extra.into_iter().map(|w| free_reduce(&w)));
        Presentation {
            labels: self.labels.clone(),
            relators,
        }
    }

    /// Canonical JSON: generator names and relators as `[name, exponent]`
    /// pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let generators: Vec<String> = self.labels.iter().map(|l| l.display()).collect();
        let relators: Vec<Vec<(String, i64)>> = self
            .relators
            .iter()
            .map(|w| {
                w.iter()
                    .map(|&s| {
                        (
                            self.labels[(s.unsigned_abs() as usize) - 1].display(),
                            s.signum(),
                        )
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({"generators": generators, "relators": relators})
    }

    pub fn word_display(&self, w: &[i64]) -> String {
        w.iter()
            .map(|&s| {
                let name = self.labels[(s.unsigned_abs() as usize) - 1].display();
                if s > 0 {
                    name
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

// ---------------------------------------------------------------------------
// Abelianization via Smith normal form
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelianization {
    /// invariant factors > 1, in divisibility order
    pub torsion: Vec<u64>,
    pub free_rank: usize,
}

impl Abelianization {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

/// Smith normal form of the relator exponent matrix over the integers.
pub fn abelianization(p: &Presentation) -> Abelianization {
    let n = p.generator_count();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for r in p.relators() {
        let mut row = vec![0i128; n];
        for &s in r {
            let k = (s.unsigned_abs() as usize) - 1;
            row[k] += if s > 0 { 1 } else { -1 };
        }
        rows.push(row);
    }
    let diag = smith_diagonal(rows, n);
    let rank = diag.iter().filter(|&&d| d != 0).count();
    let torsion: Vec<u64> = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
    Abelianization {
        torsion,
        free_rank: n - rank,
    }
}

/// Diagonal of the Smith normal form of an integer matrix (entries >= 0, in
/// divisibility order).
#[allow(clippy::needless_range_loop)] // split borrows across rows
pub fn smith_diagonal(mut m: Vec<Vec<i128>>, ncols: usize) -> Vec<i128> {
    let nrows = m.len();
    let rank_bound = nrows.min(ncols);
    let mut diag = Vec::new();
    let mut top = 0usize;
    while top < rank_bound {
        // locate a nonzero entry of minimal absolute value in the submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..nrows {
            for j in top..ncols {
                if m[i][j] != 0 {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => m[i][j].abs() < m[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(top, pj);
        }
        // eliminate; pivoting restarts whenever a remainder appears
        loop {
            let mut clean = true;
            for i in top + 1..nrows {
                if m[i][top] != 0 {
                    let q = m[i][top] / m[top][top];
                    for j in top..ncols {
                        m[i][j] -= q * m[top][j];
                    }
                    if m[i][top] != 0 {
                        m.swap(top, i);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            for j in top + 1..ncols {
                if m[top][j] != 0 {
                    let q = m[top][j] / m[top][top];
                    for row in m.iter_mut().skip(top) {
                        let v = row[top];
                        row[j] -= q * v;
                    }
                    if m[top][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(top, j);
                        }
                        clean = false;
                        break;
                    }
                }
            }
            if clean {
                break;
            }
        }
        diag.push(m[top][top].abs());
        top += 1;
    }
    // enforce the divisibility chain d1 | d2 | ...
    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..diag.len().saturating_sub(1) {
            let (a, b) = (diag[k], diag[k + 1]);
            if a != 0 && b % a != 0 {
                let g = gcd(a, b);
                diag[k] = g;
                diag[k + 1] = a / g * b;
                changed = true;
            }
        }
        // zeros sort to the end
        diag.sort_by_key(|&d| if d == 0 { i128::MAX } else { d });
    }
    while diag.last() == Some(&0) {
        diag.pop();
    }
    diag
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// Todd-Coxeter coset enumeration (HLT with coincidence handling)
// ---------------------------------------------------------------------------

/// A complete coset table: rows are cosets, columns signed generators.  Rows
/// are standardized (breadth-first renumbering from coset 0 in generator
/// order), so the table and the representative words are canonical.
#[derive(Clone, Debug)]
pub struct CosetTable {
    n_gens: usize,
    table: Vec<Vec<usize>>,
    rep_words: Vec<Word>,
}

impl CosetTable {
    pub fn coset_count(&self) -> usize {
        self.table.len()
    }

    pub fn is_complete(&self) -> bool {
        true
    }

    /// Representative word for a coset (breadth-first shortest, canonical).
    pub fn rep_word(&self, coset: usize) -> &Word {
        &self.rep_words[coset]
    }

    fn column(&self, s: i64) -> usize {
        let g = (s.unsigned_abs() as usize) - 1;
        if s > 0 {
            2 * g
        } else {
            2 * g + 1
        }
    }

    pub fn step(&self, coset: usize, s: i64) -> usize {
        self.table[coset][self.column(s)]
    }

    pub fn trace(&self, coset: usize, word: &[i64]) -> usize {
        word.iter().fold(coset, |c, &s| self.step(c, s))
    }

    /// The permutation action of one generator on cosets.  Tables record
    /// right multiplication, which composes contravariantly; taking the
    /// inverse column makes `g |-> perm` a homomorphism under this crate's
    /// left-to-right product convention.
    pub fn generator_perm(&self, gen: usize) -> Perm {
        Perm::from_images(
            (0..self.coset_count())
                .map(|c| self.table[c][2 * gen + 1])
                .collect(),
        )
        .expect("complete coset table columns are permutations")
    }

    /// The permutation group generated by the action on cosets (the regular
    /// representation when the subgroup is trivial).
    pub fn perm_group(&self) -> PermGroup {
        let gens: Vec<Perm> = (0..self.n_gens).map(|g| self.generator_perm(g)).collect();
        PermGroup::generated(self.coset_count(), gens, self.coset_count().max(1) * 64)
            .expect("coset action closes within a multiple of the index")
    }
}

struct TcState {
    n_cols: usize,
    table: Vec<Vec<Option<usize>>>,
    forward: Vec<Option<usize>>,
    live: usize,
    defined_total: usize,
    budget: usize,
}

impl TcState {
    fn new(n_gens: usize, budget: usize) -> Self {
        TcState {
            n_cols: 2 * n_gens,
            table: vec![vec![None; 2 * n_gens]],
            forward: vec![None],
            live: 1,
            defined_total: 1,
            budget,
        }
    }

    fn rep(&mut self, mut c: usize) -> usize {
        while let Some(f) = self.forward[c] {
            if let Some(g) = self.forward[f] {
                self.forward[c] = Some(g);
            }
            c = f;
        }
        c
    }

    fn col(s: i64) -> usize {
        let g = (s.unsigned_abs() as usize) - 1;
        if s > 0 {
            2 * g
        } else {
            2 * g + 1
        }
    }

    fn inv_col(c: usize) -> usize {
        c ^ 1
    }

    fn define(&mut self, from: usize, col: usize) -> Result<usize, FpError> {
        self.defined_total += 1;
        if self.defined_total > self.budget {
            return Err(FpError::Exceeded {
                budget: self.budget,
            });
        }
        let new = self.table.len();
        self.table.push(vec![None; self.n_cols]);
        self.forward.push(None);
        self.live += 1;
        self.table[from][col] = Some(new);
        self.table[new][Self::inv_col(col)] = Some(from);
        Ok(new)
    }

    fn set(&mut self, a: usize, col: usize, b: usize, queue: &mut Vec<(usize, usize)>) {
        match self.table[a][col] {
            None => {
                self.table[a][col] = Some(b);
                match self.table[b][Self::inv_col(col)] {
                    None => self.table[b][Self::inv_col(col)] = Some(a),
                    Some(other) => {
                        if other != a {
                            queue.push((other, a));
                        }
                    }
                }
            }
            Some(other) => {
                if other != b {
                    queue.push((other, b));
                }
            }
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            let (x, y) = (self.rep(x), self.rep(y));
            if x == y {
                continue;
            }
            let (keep, drop) = if x < y { (x, y) } else { (y, x) };
            self.forward[drop] = Some(keep);
            self.live -= 1;
            for col in 0..self.n_cols {
                if let Some(d) = self.table[drop][col] {
                    let d = self.rep(d);
                    // remove the stale inverse entry pointing back at drop
                    if let Some(back) = self.table[d][Self::inv_col(col)] {
                        if self.rep(back) == drop {
                            self.table[d][Self::inv_col(col)] = None;
                        }
                    }
                    self.set(keep, col, d, &mut queue);
                }
            }
        }
    }

    /// Scans `word` at coset `start`, filling gaps with new cosets (HLT).
    fn scan_and_fill(&mut self, start: usize, word: &[i64]) -> Result<(), FpError> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = self.rep(start);
        let mut i = 0usize;
        let mut b = f;
        let mut r = word.len();
        loop {
            while i < r {
                match self.table[f][Self::col(word[i])] {
                    Some(next) => {
                        f = self.rep(next);
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == r {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while r > i {
                match self.table[b][Self::inv_col(Self::col(word[r - 1]))] {
                    Some(prev) => {
                        b = self.rep(prev);
                        r -= 1;
                    }
                    None => break,
                }
            }
            if r == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if r == i + 1 {
                let mut queue = Vec::new();
                self.set(f, Self::col(word[i]), b, &mut queue);
                for (x, y) in queue {
                    self.coincidence(x, y);
                }
                return Ok(());
            }
            // gap of length >= 2: define one new coset and keep scanning
            let new = self.define(f, Self::col(word[i]))?;
            f = new;
            i += 1;
        }
    }
}

fn run_hlt(
    p: &Presentation,
    subgroup_words: &[Word],
    budget: usize,
) -> Result<TcState, (TcState, FpError)> {
    let mut st = TcState::new(p.generator_count(), budget);
    macro_rules! try_or_bail {
        ($st:ident, $e:expr) => {
            if let Err(err) = $e {
                return Err(($st, err));
            }
        };
    }
    for w in subgroup_words {
        try_or_bail!(st, st.scan_and_fill(0, w));
    }
    let mut alpha = 0usize;
    while alpha < st.table.len() {
        if st.forward[alpha].is_some() {
            alpha += 1;
            continue;
        }
        for w in p.relators() {
            try_or_bail!(st, st.scan_and_fill(alpha, w));
            if st.forward[alpha].is_some() {
                break;
            }
        }
        if st.forward[alpha].is_none() {
            for col in 0..st.n_cols {
                if st.forward[alpha].is_some() {
                    break;
                }
                if st.table[alpha][col].is_none() {
                    try_or_bail!(st, st.define(alpha, col).map(|_| ()));
                }
            }
        }
        alpha += 1;
    }
    Ok(st)
}

fn check_words(p: &Presentation, subgroup_words: &[Word]) -> Result<(), FpError> {
    for w in p.relators().iter().chain(subgroup_words.iter()) {
        for &s in w {
            let g = s.unsigned_abs() as usize;
            if g == 0 || g > p.generator_count() {
                return Err(FpError::BadWord(g));
            }
        }
    }
    Ok(())
}

/// HLT-style coset enumeration of the subgroup generated by
/// `subgroup_words` inside the presented group.  `budget` bounds the total
/// number of cosets ever defined.  Scan order is deterministic:
/// relator-first at each coset, cosets in increasing order.
#[allow(clippy::needless_range_loop)] // row writes interleave with rep() lookups
pub fn todd_coxeter(
    p: &Presentation,
    subgroup_words: &[Word],
    budget: usize,
) -> Result<CosetTable, FpError> {
    if budget == 0 {
        return Err(FpError::Exceeded { budget });
    }
    check_words(p, subgroup_words)?;
    let mut st = match run_hlt(p, subgroup_words, budget) {
        Ok(st) => st,
        Err((_, err)) => return Err(err),
    };
    // compress and standardize: breadth-first renumbering from coset 0
    let n_gens = p.generator_count();
    let mut number: BTreeMap<usize, usize> = BTreeMap::new();
    let root = st.rep(0);
    let mut order: Vec<usize> = vec![root];
    let mut rep_words: Vec<Word> = vec![Vec::new()];
    number.insert(root, 0);
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        for g in 0..n_gens {
            for (col, sign) in [(2 * g, 1i64), (2 * g + 1, -1i64)] {
                if let Some(d) = st.table[c][col] {
                    let d = st.rep(d);
                    if let std::collections::btree_map::Entry::Vacant(slot) = number.entry(d) {
                        slot.insert(order.len());
                        let mut w = rep_words[head].clone();
                        w.push(sign * (g as i64 + 1));
                        order.push(d);
                        rep_words.push(w);
                    }
                }
            }
        }
        head += 1;
    }
    if order.len() != st.live {
        // a live coset unreachable from 0 cannot happen in a closed table
        return Err(FpError::Exceeded { budget });
    }
    let mut table = vec![vec![0usize; 2 * n_gens]; order.len()];
    for (new_c, &old_c) in order.iter().enumerate() {
        for col in 0..2 * n_gens {
            let d = st.table[old_c][col].expect("closed table has all entries");
            table[new_c][col] = number[&st.rep(d)];
        }
    }
    let result = CosetTable {
        n_gens,
        table,
        rep_words,
    };
    // final verification: every relator closes everywhere, every subgroup
    // word fixes coset 0
    for c in 0..result.coset_count() {
        for w in p.relators() {
            debug_assert_eq!(result.trace(c, w), c);
        }
    }
    for w in subgroup_words {
        debug_assert_eq!(result.trace(0, w), 0);
    }
    Ok(result)
}

/// An incomplete coset table, kept when enumeration runs out of budget.
/// Traces may fail (undefined entries), and distinct live cosets carry no
/// guarantee of representing distinct cosets: coincidences the enumeration
/// had not yet discovered may still merge them.
#[derive(Clone, Debug)]
pub struct PartialCosetTable {
    table: Vec<Vec<Option<usize>>>,
    rep_words: Vec<Option<Word>>,
}

impl PartialCosetTable {
    pub fn coset_count(&self) -> usize {
        self.table.len()
    }

    fn column(s: i64) -> usize {
        let g = (s.unsigned_abs() as usize) - 1;
        if s > 0 {
            2 * g
        } else {
            2 * g + 1
        }
    }

    /// Follows a word through the table; `None` as soon as an entry is
    /// undefined.
    pub fn trace(&self, coset: usize, word: &[i64]) -> Option<usize> {
        let mut c = coset;
        for &s in word {
            c = self.table[c][Self::column(s)]?;
        }
        Some(c)
    }

    /// A breadth-first representative word for a coset, when it is reachable
    /// from coset 0 through defined entries.
    pub fn rep_word(&self, coset: usize) -> Option<&Word> {
        self.rep_words[coset].as_ref()
    }
}

/// Runs the same enumeration but keeps whatever (possibly incomplete) table
/// exists when the budget runs out.  Live cosets are compressed and
/// renumbered in definition order.
#[allow(clippy::needless_range_loop)] // row writes interleave with rep() lookups
pub fn todd_coxeter_partial(
    p: &Presentation,
    subgroup_words: &[Word],
    budget: usize,
) -> PartialCosetTable {
    let mut st = match run_hlt(p, subgroup_words, budget) {
        Ok(st) => st,
        Err((st, _)) => st,
    };
    let alive: Vec<usize> = (0..st.table.len())
        .filter(|&c| st.forward[c].is_none())
        .collect();
    let number: BTreeMap<usize, usize> = alive.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let n_cols = st.n_cols;
    let mut table = vec![vec![None; n_cols]; alive.len()];
    for (new_c, &old_c) in alive.iter().enumerate() {
        for col in 0..n_cols {
            if let Some(d) = st.table[old_c][col] {
                let d = st.rep(d);
                table[new_c][col] = number.get(&d).copied();
            }
        }
    }
    // breadth-first representative words from coset 0 over defined entries
    let mut rep_words: Vec<Option<Word>> = vec![None; table.len()];
    if !table.is_empty() {
        rep_words[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for g in 0..n_cols / 2 {
                for (col, sign) in [(2 * g, 1i64), (2 * g + 1, -1i64)] {
                    if let Some(d) = table[c][col] {
                        if rep_words[d].is_none() {
                            let mut w = rep_words[c].clone().unwrap();
                            w.push(sign * (g as i64 + 1));
                            rep_words[d] = Some(w);
                            queue.push_back(d);
                        }
                    }
                }
            }
        }
    }
    PartialCosetTable { table, rep_words }
}

// ---------------------------------------------------------------------------
// Bounded Tietze simplification
// ---------------------------------------------------------------------------

/// A presentation together with an expression of every original symbol as a
/// word in the surviving generators.
#[derive(Clone, Debug)]
pub struct SimplifiedPresentation {
    pub pres: Presentation,
    /// original label -> word over the simplified presentation's indices
    pub expressions: BTreeMap<GenLabel, Word>,
}

impl SimplifiedPresentation {
    pub fn expression(&self, label: &GenLabel) -> &Word {
        &self.expressions[label]
    }

    /// Rewrites a word over the original labels into the simplified indices.
    pub fn rewrite(&self, original: &Presentation, w: &[i64]) -> Word {
        let mut out = Vec::new();
        for &s in w {
            let label = &original.labels()[(s.unsigned_abs() as usize) - 1];
            let e = self.expression(label);
            if s > 0 {
                out.extend_from_slice(e);
            } else {
                out.extend(word_inverse(e));
            }
        }
        free_reduce(&out)
    }
}

/// Bounded, deterministic Tietze simplification: drops generators killed by
/// length-1 relators and substitutes length-2 definitions, for at most
/// `max_passes` passes.  Full simplification is not attempted.
pub fn tietze_simplify(p: &Presentation, max_passes: usize) -> SimplifiedPresentation {
    let n = p.generator_count();
    let mut active: Vec<bool> = vec![true; n];
    let mut relators: Vec<Word> = p.relators().iter().map(|w| free_reduce(w)).collect();
    // expressions over the original index space
    let mut exprs: Vec<Word> = (1..=n as i64).map(|k| vec![k]).collect();

    for _ in 0..max_passes {
        let mut changed = false;
        // exhaust the available length-1 and length-2 definitions this pass
        loop {
            relators = normalize_relators(relators);
            let mut substitution: Option<(i64, Word)> = None;
            for w in &relators {
                if w.len() == 1 {
                    substitution = Some((w[0].abs(), Vec::new()));
                    break;
                }
                if w.len() == 2 && w[0].abs() != w[1].abs() {
                    // eliminate the larger index for determinism
                    let (a, b) = (w[0], w[1]);
                    let (gone, expr) = if a.abs() > b.abs() {
                        // G(a) = G(b)^-1
                        (a.abs(), vec![-b * a.signum()])
                    } else {
                        (b.abs(), vec![-a * b.signum()])
                    };
                    substitution = Some((gone, expr));
                    break;
                }
            }
            let Some((gone, replacement)) = substitution else {
                break;
            };
            changed = true;
            active[(gone as usize) - 1] = false;
            relators = relators
                .iter()
                .map(|w| substitute(w, gone, &replacement))
                .collect();
            for e in exprs.iter_mut() {
                *e = substitute(e, gone, &replacement);
            }
        }
        if !changed {
            break;
        }
    }
    relators = normalize_relators(relators);

    // renumber the survivors
    let mut new_index: Vec<Option<i64>> = vec![None; n];
    let mut labels = Vec::new();
    for (k, is_active) in active.iter().enumerate() {
        if *is_active {
            labels.push(p.labels()[k].clone());
            new_index[k] = Some(labels.len() as i64);
        }
    }
    let renumber = |w: &[i64]| -> Word {
        w.iter()
            .map(|&s| {
                let idx = new_index[(s.unsigned_abs() as usize) - 1]
                    .expect("eliminated generators were substituted away");
                idx * s.signum()
            })
            .collect()
    };
    let relators: Vec<Word> = relators.iter().map(|w| renumber(w)).collect();
    let expressions: BTreeMap<GenLabel, Word> = p
        .labels()
        .iter()
        .enumerate()
        .map(|(k, label)| (label.clone(), renumber(&exprs[k])))
        .collect();
    SimplifiedPresentation {
        pres: Presentation::new(labels, relators),
        expressions,
    }
}

fn normalize_relators(relators: Vec<Word>) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for w in relators {
        let w = free_reduce(&w);
        if w.is_empty() || out.contains(&w) {
            continue;
        }
        out.push(w);
    }
    out
}

// ---------------------------------------------------------------------------
// Presentations of the universal group and the fundamental group
// ---------------------------------------------------------------------------

/// Presentation of the universal group of a complex of groups: one generator
/// per non-identity local element per vertex plus one per edge; relators are
/// the local multiplication tables, `a+ b+ = g_{a,b} (ab)+` over composable
/// pairs, and `psi_a(g) = a+ g a-` over edges.
pub fn universal_group_presentation(cog: &ComplexOfGroups) -> Presentation {
    let mut labels: Vec<GenLabel> = Vec::new();
    let mut index: BTreeMap<GenLabel, i64> = BTreeMap::new();
    for v in cog.base().vertex_ids() {
        for g in cog.local_group(&v).elements() {
            if g.is_identity() {
                continue;
            }
            let label = GenLabel::Vertex {
                vertex: v.clone(),
                element: g.images().to_vec(),
            };
            labels.push(label.clone());
            index.insert(label, labels.len() as i64);
        }
    }
    for a in cog.base().edge_ids() {
        let label = GenLabel::Edge { edge: a.clone() };
        labels.push(label.clone());
        index.insert(label, labels.len() as i64);
    }
    let word_of = |vertex: &str, g: &Perm| -> Word {
        if g.is_identity() {
            Vec::new()
        } else {
            vec![
                index[&GenLabel::Vertex {
                    vertex: vertex.to_string(),
                    element: g.images().to_vec(),
                }],
            ]
        }
    };
    let edge_sym = |a: &str| -> i64 {
        index[&GenLabel::Edge {
            edge: a.to_string(),
        }]
    };

    let mut relators: Vec<Word> = Vec::new();
    // local multiplication tables
    for v in cog.base().vertex_ids() {
        let group = cog.local_group(&v);
        for g in group.elements() {
            for h in group.elements() {
                if g.is_identity() || h.is_identity() {
                    continue;
                }
                let mut w = word_of(&v, g);
                w.extend(word_of(&v, h));
                w.extend(word_inverse(&word_of(&v, &g.mul(h))));
                relators.push(w);
            }
        }
    }
    // a+ b+ = g_{a,b} (ab)+
    for ((a, b), ab) in &cog.base().compositions {
        let twist = cog.twist(a, b);
        let mut w = vec![edge_sym(a), edge_sym(b), -edge_sym(ab)];
        w.extend(word_inverse(&word_of(cog.base().terminal(a), &twist)));
        relators.push(w);
    }
    // psi_a(g) = a+ g a-
    for a in cog.base().edge_ids() {
        let i_v = cog.base().initial(&a).to_string();
        let t_v = cog.base().terminal(&a).to_string();
        let hom = cog.edge_hom(&a);
        for g in cog.local_group(&i_v).elements() {
            if g.is_identity() {
                continue;
            }
            let mut w = vec![edge_sym(&a)];
            w.extend(word_of(&i_v, g));
            w.push(-edge_sym(&a));
            w.extend(word_inverse(&word_of(&t_v, &hom.apply(g))));
            relators.push(w);
        }
    }
    Presentation::new(labels, relators)
}

/// Default number of Tietze passes for fundamental-group presentations.
pub const DEFAULT_TIETZE_PASSES: usize = 10;

/// Presentation of the fundamental group with respect to a maximal tree:
/// the universal group presentation plus the relators `a+ = 1` for tree
/// edges, then bounded simplification.
pub fn pi1_presentation(
    cog: &ComplexOfGroups,
    tree: &[String],
) -> Result<(Presentation, SimplifiedPresentation), FpError> {
    if !crate::scwol::is_spanning_tree(cog.base(), tree) {
        return Err(FpError::NotASpanningTree {
            reason: format!("{tree:?} is not spanning and acyclic in the 1-skeleton"),
        });
    }
    let raw = universal_group_presentation(cog);
    let mut extra = Vec::new();
    for a in tree {
        let idx = raw
            .index_of(&GenLabel::Edge { edge: a.clone() })
            .ok_or_else(|| FpError::UnknownGenerator(a.clone()))?;
        extra.push(vec![idx as i64 + 1]);
    }
    let with_tree = raw.with_extra_relators(extra);
    let simplified = tietze_simplify(&with_tree, DEFAULT_TIETZE_PASSES);
    Ok((with_tree, simplified))
}

// ---------------------------------------------------------------------------
// Evaluating presentations into permutation groups
// ---------------------------------------------------------------------------

/// A verified assignment of permutations to the generators of a
/// presentation.
#[derive(Clone, Debug)]
pub struct PresHom {
    pub images: Vec<Perm>,
    pub surjective: bool,
}

/// Checks that `images` satisfy all relators of `p` inside `target`, and
/// whether they generate it.
pub fn hom_to_perm_group(
    p: &Presentation,
    target: &PermGroup,
    images: &[Perm],
) -> Result<PresHom, FpError> {
    if images.len() != p.generator_count() {
        return Err(FpError::BadWord(images.len()));
    }
    for w in p.relators() {
        if !eval_word(images, target.degree(), w).is_identity() {
            return Err(FpError::RelatorFails {
                relator: p.word_display(w),
            });
        }
    }
    let generated = PermGroup::generated(
        target.degree(),
        images
            .iter()
            .filter(|p| !p.is_identity())
            .cloned()
            .collect(),
        target.order().max(1),
    )
    .map_err(|_| FpError::Exceeded {
        budget: target.order(),
    })?;
    let surjective = generated.order() == target.order();
    Ok(PresHom {
        images: images.to_vec(),
        surjective,
    })
}

/// Evaluates a word under generator images (left-to-right product).
pub fn eval_word(images: &[Perm], degree: usize, w: &[i64]) -> Perm {
    let mut acc = Perm::identity(degree);
    for &s in w {
        let g = &images[(s.unsigned_abs() as usize) - 1];
        let g = if s > 0 { g.clone() } else { g.inverse() };
        acc = acc.mul(&g);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn free_reduction() {
        assert_eq!(free_reduce(&[1, -1]), Vec::<i64>::new());
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(free_reduce(&[1, 1]), vec![1, 1]);
    }

    #[test]
    fn abelianization_examples() {
        let free1 = Presentation::named(&["x"], vec![]);
        let ab = abelianization(&free1);
        assert_eq!(ab.free_rank, 1);
        assert!(ab.torsion.is_empty());

        let d_inf = Presentation::named(&["x", "y"], vec![vec![1, 1], vec![2, 2]]);
        let ab = abelianization(&d_inf);
        assert_eq!(ab.free_rank, 0);
        assert_eq!(ab.torsion, vec![2, 2]);

        let z3 = Presentation::named(&["x"], vec![vec![1, 1, 1]]);
        let ab = abelianization(&z3);
        assert_eq!(ab.free_rank, 0);
        assert_eq!(ab.torsion, vec![3]);
    }

    #[test]
    fn snf_oracle_matrix() {
        // diag(1, 3, 21, 0) is the classical normal form of this matrix
        let m: Vec<Vec<i128>> = vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ];
        assert_eq!(smith_diagonal(m, 4), vec![1, 3, 21]);
    }

    #[test]
    fn todd_coxeter_orders() {
        let z3 = Presentation::named(&["x"], vec![vec![1, 1, 1]]);
        assert_eq!(todd_coxeter(&z3, &[], 100).unwrap().coset_count(), 3);

        let s3 = Presentation::named(
            &["x", "y"],
            vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]],
        );
        let t = todd_coxeter(&s3, &[], 100).unwrap();
        assert_eq!(t.coset_count(), 6);
        // regular representation has the group's order
        assert_eq!(t.perm_group().order(), 6);
        // index of <x>
        let over_x = todd_coxeter(&s3, &[vec![1]], 100).unwrap();
        assert_eq!(over_x.coset_count(), 3);

        let d_inf = Presentation::named(&["x", "y"], vec![vec![1, 1], vec![2, 2]]);
        assert!(matches!(
            todd_coxeter(&d_inf, &[], 2000),
            Err(FpError::Exceeded { .. })
        ));
    }

    #[test]
    fn todd_coxeter_trivial_and_identity_traces() {
        let t = todd_coxeter(
            &Presentation::named(&["x", "y"], vec![vec![1], vec![2]]),
            &[],
            100,
        )
        .unwrap();
        assert_eq!(t.coset_count(), 1);
        let q8ish = Presentation::named(
            &["a", "b"],
            vec![vec![1, 1, 1, 1], vec![2, 2, -1, -1], vec![-2, 1, 2, 1]],
        );
        let t = todd_coxeter(&q8ish, &[], 500).unwrap();
        assert_eq!(t.coset_count(), 8);
        for c in 0..t.coset_count() {
            for w in q8ish.relators() {
                assert_eq!(t.trace(c, w), c);
            }
        }
        // rep words reproduce the cosets
        for c in 0..t.coset_count() {
            assert_eq!(t.trace(0, t.rep_word(c)), c);
        }
    }

    #[test]
    fn tietze_keeps_expressions() {
        // x y = 1 eliminates y; abelianization unchanged
        let p = Presentation::named(&["x", "y", "z"], vec![vec![1, 2], vec![3, 3, 3]]);
        let s = tietze_simplify(&p, 10);
        assert_eq!(s.pres.generator_count(), 2);
        let before = abelianization(&p);
        let after = abelianization(&s.pres);
        assert_eq!(before, after);
        // y expressed through x
        let y = s.expression(&GenLabel::Named("y".to_string()));
        assert_eq!(y, &vec![-1]);
        let rewritten = s.rewrite(&p, &[2, 1]);
        assert!(rewritten.is_empty());
    }

    #[test]
    fn d3seg_pi1() {
        let cog = fixtures::d3seg();
        let tree = vec!["a1".to_string(), "a2".to_string()];
        let (_, simplified) = pi1_presentation(&cog, &tree).unwrap();
        assert_eq!(simplified.pres.generator_count(), 2);
        let ab = abelianization(&simplified.pres);
        assert_eq!(ab.torsion, vec![2, 2]);
        assert_eq!(ab.free_rank, 0);
        // infinite group: enumeration over the trivial subgroup exceeds
        assert!(matches!(
            todd_coxeter(&simplified.pres, &[], 2000),
            Err(FpError::Exceeded { .. })
        ));
        // adding (xy)^3 gives the dihedral group of order 6
        let dihedral = simplified
            .pres
            .with_extra_relators(vec![vec![1, 2, 1, 2, 1, 2]]);
        assert_eq!(todd_coxeter(&dihedral, &[], 100).unwrap().coset_count(), 6);
        // index of a vertex Z/2 subgroup is infinite
        assert!(matches!(
            todd_coxeter(&simplified.pres, &[vec![1]], 2000),
            Err(FpError::Exceeded { .. })
        ));
    }

    #[test]
    fn universal_group_of_trivial_seg_complex_is_free_rank_two() {
        let trivial = crate::cog::ComplexOfGroups::trivial_over(fixtures::seg());
        let p = universal_group_presentation(&trivial);
        assert_eq!(p.generator_count(), 2);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn bad_tree_rejected() {
        let cog = fixtures::d3seg();
        let err = pi1_presentation(&cog, &["a1".to_string()]).unwrap_err();
        assert!(matches!(err, FpError::NotASpanningTree { .. }));
    }

    #[test]
    fn hom_to_perm_group_checks() {
        let z2 = Presentation::named(&["x"], vec![vec![1, 1]]);
        let target =
            PermGroup::generated_default_cap(2, vec![Perm::from_cycle(2, &[0, 1]).unwrap()])
                .unwrap();
        let ok = hom_to_perm_group(&z2, &target, &[Perm::from_cycle(2, &[0, 1]).unwrap()]).unwrap();
        assert!(ok.surjective);
        let s3 = PermGroup::symmetric(3);
        let bad = hom_to_perm_group(&z2, &s3, &[Perm::from_cycle(3, &[0, 1, 2]).unwrap()]);
        assert!(matches!(bad, Err(FpError::RelatorFails { .. })));
        let d_inf = Presentation::named(&["x", "y"], vec![vec![1, 1], vec![2, 2]]);
        let onto = hom_to_perm_group(
            &d_inf,
            &s3,
            &[
                Perm::from_cycle(3, &[0, 1]).unwrap(),
                Perm::from_cycle(3, &[1, 2]).unwrap(),
            ],
        )
        .unwrap();
        assert!(onto.surjective);
    }
}
