//! Rewriting engine for lattice sums with hyperplane denominators.
//!
//! A term is `coeff * sum_{n in N^V} P(n) / prod_j (sum_{i in S_j} n_i + c_j)^{k_j}`
//! with unit-coefficient supports. The engine rewrites terms until every
//! support family is a chain under inclusion, then hands the chain to the
//! series engine. Moves, all exact and guarded:
//!
//! * collapse of variables with identical form membership (convolution,
//!   realizing the identical-row lemma),
//! * stuffle split of a variable pair sharing no form (order/tie split; the
//!   restriction keeps every support 0/1),
//! * Orlik-Solomon split of two disjoint-support factors toward their union,
//! * insertion splitting `1/(L_a L_b L_union) = (1/L_inter)(...)` when the
//!   union form is present and the intersection form cannot vanish,
//! * nested-difference splitting `1/(L_x L_y) = 1/(L_y - L_x)(1/L_x - 1/L_y)`
//!   for nested supports with a nonvanishing difference form.

use crate::error::{BigZetaError, SeriesError};
use crate::exact::mpoly::MPoly;
use crate::exact::poly::Poly;
use crate::exact::rational::{binomial, rat_i, Rat};
use crate::mzv::MzvCombination;
use crate::series::chain::{ChainReducer, ChainTerm};
use crate::series::faulhaber::fiber_sum_poly;
use num_traits::Zero;

/// One denominator factor `(sum_{i in support} n_i + shift)^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub incidence: Vec<bool>,
    pub shift: i64,
    pub power: u32,
}

impl Form {
    pub fn support_size(&self) -> usize {
        self.incidence.iter().filter(|&&b| b).count()
    }
}

/// A lattice sum in rewriting normal form.
#[derive(Clone, Debug)]
pub struct HyperplaneTerm {
    pub coeff: Rat,
    pub numerator: MPoly,
    pub forms: Vec<Form>,
}

impl HyperplaneTerm {
    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }
}

/// Pole-freeness on N^V: with unit coefficients a form attains exactly the
/// values `{|S| + shift, |S| + shift + 1, ...}`, so it avoids zero iff
/// `shift >= 1 - |S|` (or it is a nonzero constant).
fn pole_free(forms: &[Form]) -> bool {
    forms.iter().all(|f| {
        let s = f.support_size() as i64;
        if s == 0 {
            f.shift != 0
        } else {
            f.shift >= 1 - s
        }
    })
}

/// Power-counting convergence: group variables by membership pattern; for
/// every nonempty set T of groups, the total power of the forms touching T
/// must exceed the number of variables in T plus the numerator degree over
/// those variables.
fn convergent(term: &HyperplaneTerm) -> bool {
    if !pole_free(&term.forms) {
        return false;
    }
    let n = term.nvars();
    if n == 0 {
        return true;
    }
    // membership pattern of each variable
    let mut patterns: Vec<(Vec<usize>, Vec<usize>)> = Vec::new(); // (form set, vars)
    for v in 0..n {
        let memb: Vec<usize> = term
            .forms
            .iter()
            .enumerate()
            .filter(|(_, f)| f.incidence[v])
            .map(|(j, _)| j)
            .collect();
        if memb.is_empty() {
            return false; // free variable: divergent
        }
        match patterns.iter_mut().find(|(m, _)| *m == memb) {
            Some((_, vars)) => vars.push(v),
            None => patterns.push((memb, vec![v])),
        }
    }
    let g = patterns.len();
    if g > 20 {
        return false; // out of scope; callers keep sizes small
    }
    for mask in 1u32..(1 << g) {
        let mut vars: Vec<usize> = Vec::new();
        for (gi, (_, vs)) in patterns.iter().enumerate() {
            if mask & (1 << gi) != 0 {
                vars.extend(vs);
            }
        }
        let touched: u64 = term
            .forms
            .iter()
            .filter(|f| vars.iter().any(|&v| f.incidence[v]))
            .map(|f| f.power as u64)
            .sum();
        let mut num_deg = 0u32;
        for (e, _) in term.numerator.terms() {
            let d: u32 = vars.iter().map(|&v| e[v]).sum();
            num_deg = num_deg.max(d);
        }
        if touched <= vars.len() as u64 + num_deg as u64 {
            return false;
        }
    }
    true
}

pub(crate) fn term_convergent(term: &HyperplaneTerm) -> bool {
    convergent(term)
}

/// Collapse one group of variables with identical form membership, returning
/// the rewritten term; Err(NoIdenticalRows) when every membership is unique.
pub fn collapse_identical_group(term: &HyperplaneTerm) -> Result<HyperplaneTerm, BigZetaError> {
    let n = term.nvars();
    for u in 0..n {
        for v in (u + 1)..n {
            if (0..term.forms.len())
                .all(|j| term.forms[j].incidence[u] == term.forms[j].incidence[v])
                && term.forms.iter().any(|f| f.incidence[u])
            {
                return Ok(collapse_pair(term, u, v));
            }
        }
    }
    Err(BigZetaError::NoIdenticalRows)
}

/// Merge variables u and v (identical membership) into one variable z' with
/// `n_u + n_v = z' + 1`.
fn collapse_pair(term: &HyperplaneTerm, u: usize, v: usize) -> HyperplaneTerm {
    let n = term.nvars();
    let mut new_num = MPoly::zero(n);
    let mut cache: std::collections::BTreeMap<(u32, u32), Poly> = Default::default();
    for (e, c) in term.numerator.terms() {
        let (i, j) = (e[u], e[v]);
        let fiber = cache
            .entry((i, j))
            .or_insert_with(|| fiber_sum_poly(&[i, j]))
            .clone();
        // fiber(z) with z = x_u + 1
        let arg = MPoly::var(n, u).add(&MPoly::constant(n, rat_i(1)));
        let mut comp = MPoly::zero(n);
        let mut pw = MPoly::one(n);
        for fc in fiber.coeffs() {
            if !fc.is_zero() {
                comp = comp.add(&pw.scale(fc));
            }
            pw = pw.mul(&arg);
        }
        let mut base = e.clone();
        base[u] = 0;
        base[v] = 0;
        let mut mono = MPoly::zero(n);
        mono.add_term(base, c.clone());
        new_num = new_num.add(&mono.mul(&comp));
    }
    let mut forms: Vec<Form> = term
        .forms
        .iter()
        .map(|f| {
            let mut f2 = f.clone();
            if f2.incidence[v] {
                f2.incidence[v] = false;
                f2.shift += 1;
            }
            f2
        })
        .collect();
    // drop variable v
    let new_num = new_num.remove_unused_var(v);
    for f in &mut forms {
        f.incidence.remove(v);
    }
    HyperplaneTerm {
        coeff: term.coeff.clone(),
        numerator: new_num,
        forms,
    }
}

pub(crate) struct Engine {
    pub result: MzvCombination,
    fuel: u64,
    series: ChainReducer,
    stats: [u64; 7],
    memo: std::collections::HashMap<String, MzvCombination>,
    depth: u32,
}

impl Engine {
    pub fn new(fuel: u64) -> Self {
        Engine {
            result: MzvCombination::zero(),
            fuel,
            series: ChainReducer::new(),
            stats: [0; 7],
            memo: std::collections::HashMap::new(),
            depth: 0,
        }
    }

    pub fn run(&mut self, term: HyperplaneTerm) -> Result<(), BigZetaError> {
        let value = self.reduce_term(term)?;
        self.result.add_assign(&value);
        Ok(())
    }

    /// Memoized reduction of one term: identical subproblems (up to the
    /// scalar coefficient) are reduced once.
    fn reduce_term(&mut self, mut term: HyperplaneTerm) -> Result<MzvCombination, BigZetaError> {
        if term.coeff.is_zero() || term.numerator.is_zero() {
            return Ok(MzvCombination::zero());
        }
        if self.fuel == 0 {
            return Err(BigZetaError::NonTerminating(format!(
                "fuel exhausted; moves (collapse, terminal, numerator, os, insert, stuffle, diff) = {:?}",
                self.stats
            )));
        }
        self.fuel -= 1;
        if self.depth > 2048 {
            return Err(BigZetaError::NonTerminating("recursion too deep".into()));
        }
        // factor the scalar out of the key
        let coeff = std::mem::replace(&mut term.coeff, rat_i(1));
        let key = {
            let mut forms = term.forms.clone();
            forms.sort_by(|a, b| (&a.incidence, a.shift, a.power).cmp(&(&b.incidence, b.shift, b.power)));
            format!("{:?}|{:?}", forms, term.numerator)
        };
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.scale(&coeff));
        }
        let mut children = Vec::new();
        let direct = self.step(term, &mut children)?;
        let mut value = direct;
        if children.len() > 1 {
            // merge structurally identical children before recursing
            let mut merged: Vec<HyperplaneTerm> = Vec::with_capacity(children.len());
            'next: for c in children {
                for m in merged.iter_mut() {
                    if m.forms == c.forms && m.numerator == c.numerator {
                        m.coeff += &c.coeff;
                        continue 'next;
                    }
                }
                merged.push(c);
            }
            children = merged;
        }
        self.depth += 1;
        for child in children {
            if child.coeff.is_zero() {
                continue;
            }
            let sub = self.reduce_term(child);
            match sub {
                Ok(v) => value.add_assign(&v),
                Err(e) => {
                    self.depth -= 1;
                    return Err(e);
                }
            }
        }
        self.depth -= 1;
        self.memo.insert(key, value.clone());
        Ok(value.scale(&coeff))
    }

    /// One rewriting step: returns the direct (terminal) contribution and
    /// pushes child terms.
    fn step(
        &mut self,
        mut term: HyperplaneTerm,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> Result<MzvCombination, BigZetaError> {
        if term.coeff.is_zero() || term.numerator.is_zero() {
            return Ok(MzvCombination::zero());
        }
        // Constant forms fold into the coefficient.
        let mut kept: Vec<Form> = Vec::with_capacity(term.forms.len());
        for f in term.forms.drain(..) {
            if f.support_size() == 0 {
                if f.shift == 0 {
                    return Err(BigZetaError::NonTerminating(
                        "vanishing constant denominator".into(),
                    ));
                }
                for _ in 0..f.power {
                    term.coeff /= rat_i(f.shift);
                }
            } else if f.power > 0 {
                kept.push(f);
            }
        }
        term.forms = kept;
        // Merge identical (incidence, shift) forms.
        term.forms.sort_by(|a, b| {
            (&a.incidence, a.shift).cmp(&(&b.incidence, b.shift))
        });
        let mut merged: Vec<Form> = Vec::with_capacity(term.forms.len());
        for f in term.forms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.incidence == f.incidence && last.shift == f.shift => {
                    last.power += f.power;
                }
                _ => merged.push(f),
            }
        }
        term.forms = merged;

        if term.nvars() == 0 {
            return Ok(MzvCombination::constant(
                &term.coeff * term.numerator.constant_term(),
            ));
        }

        // Collapse identical memberships.
        match collapse_identical_group(&term) {
            Ok(t2) => {
                self.stats[0] += 1;
                stack.push(t2);
                return Ok(MzvCombination::zero());
            }
            Err(BigZetaError::NoIdenticalRows) => {}
            Err(e) => return Err(e),
        }

        // Free variables mean divergence (convergence precondition bug).
        for v in 0..term.nvars() {
            if !term.forms.iter().any(|f| f.incidence[v]) {
                return Err(BigZetaError::NonTerminating("free variable".into()));
            }
        }

        // Chain check (the terminal stage handles polynomial numerators).
        if let Some(order) = chain_order(&term.forms) {
            self.stats[1] += 1;
            return self.terminal(term, order);
        }

        // Numerator elimination against a covering form: writing
        // n_v = L_j - sum_{other} n - c_j cancels one power of L_j or lowers
        // the degree in n_v, so the support resolution below only ever sees
        // constant numerators (whose convergence guards are then sharp).
        if !term.numerator.is_constant() {
            self.stats[2] += 1;
            self.numerator_step(term, stack)?;
            return Ok(MzvCombination::zero());
        }

        // Resolve an incomparable pair. Moves that lower (or keep) the total
        // support mass come first across all pairs: insertion consumes a
        // union power into the intersection, stuffles order variables;
        // union-building splits only fire when nothing else applies, which
        // keeps the union/intersection moves from cycling against each other.
        let pairs = incomparable_pairs(&term.forms);
        debug_assert!(!pairs.is_empty());
        for &(a, b) in &pairs {
            if !disjoint(&term.forms[a].incidence, &term.forms[b].incidence)
                && self.try_insertion(&term, a, b, stack)?
            {
                self.stats[4] += 1;
                return Ok(MzvCombination::zero());
            }
        }
        for &(a, b) in &pairs {
            if self.try_stuffle(&term, a, b, stack) {
                self.stats[5] += 1;
                return Ok(MzvCombination::zero());
            }
        }
        for &(a, b) in &pairs {
            if disjoint(&term.forms[a].incidence, &term.forms[b].incidence) {
                self.stats[3] += 1;
                self.os_split(term, a, b, stack);
                return Ok(MzvCombination::zero());
            }
        }
        if self.try_telescope(&term, stack)? {
            return Ok(MzvCombination::zero());
        }
        for &(a, b) in &pairs {
            if self.try_diff_split(&term, a, b, stack) {
                self.stats[6] += 1;
                return Ok(MzvCombination::zero());
            }
        }
        let (a, b) = pairs[0];
        let all: Vec<(String, i64, u32)> = term
            .forms
            .iter()
            .map(|f| {
                (
                    f.incidence
                        .iter()
                        .map(|&x| if x { '1' } else { '0' })
                        .collect(),
                    f.shift,
                    f.power,
                )
            })
            .collect();
        Err(BigZetaError::NonTerminating(format!(
            "no applicable move for supports {:?} / {:?} among {:?} numdeg {}",
            term.forms[a].incidence, term.forms[b].incidence, all, term.numerator.total_degree()
        )))
    }

    /// Eliminate one numerator variable by the exact linear-algebra identity
    /// `n_v = sum_j lambda_j L_j + q` over the available forms:
    /// `n_v P1 = sum_j lambda_j (L_j P1) + q P1`, where each `L_j P1` cancels
    /// one power of form j. Degrees never move between variables, so the
    /// total numerator degree strictly decreases along every branch.
    fn numerator_step(
        &mut self,
        term: HyperplaneTerm,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> Result<(), BigZetaError> {
        let n = term.nvars();
        let v = (0..n)
            .rev()
            .find(|&v| term.numerator.deg_in(v) > 0)
            .expect("nonconstant numerator");
        let (lambdas, q) = solve_variable(&term.forms, n, v).ok_or_else(|| {
            BigZetaError::NonTerminating("numerator variable outside the form span".into())
        })?;
        let (p0, p1) = term.numerator.split_var(v);
        debug_assert!(!p1.is_zero());
        for (j, lambda) in &lambdas {
            let mut a = term.clone();
            a.numerator = p1.scale(lambda);
            a.forms[*j].power -= 1;
            a.forms.retain(|f| f.power > 0);
            stack.push(a);
        }
        // remainder: (P0 + q P1), strictly lower degree in n_v
        let mut b = term;
        b.numerator = p0.add(&p1.scale(&q));
        stack.push(b);
        Ok(())
    }

    /// 1/(X^p Y^q) with disjoint supports.
    fn os_split(
        &mut self,
        term: HyperplaneTerm,
        a: usize,
        b: usize,
        stack: &mut Vec<HyperplaneTerm>,
    ) {
        let p = term.forms[a].power;
        let q = term.forms[b].power;
        let union: Vec<bool> = term.forms[a]
            .incidence
            .iter()
            .zip(&term.forms[b].incidence)
            .map(|(&x, &y)| x || y)
            .collect();
        let cu = term.forms[a].shift + term.forms[b].shift;
        let child = |keep: usize,
                         keep_pow: u32,
                         union_pow: u32,
                         factor: Rat,
                         stack: &mut Vec<HyperplaneTerm>| {
            let mut t = term.clone();
            t.coeff *= factor;
            t.forms[keep].power = keep_pow;
            let drop = if keep == a { b } else { a };
            t.forms[drop].power = 0;
            t.forms.push(Form {
                incidence: union.clone(),
                shift: cu,
                power: union_pow,
            });
            stack.push(t);
        };
        for i in 0..p {
            child(a, p - i, q + i, binomial(q as i64 - 1 + i as i64, i), stack);
        }
        for i in 0..q {
            child(b, q - i, p + i, binomial(p as i64 - 1 + i as i64, i), stack);
        }
    }

    /// With the union form present: 1/(L_a L_b L_u) = (1/L_y)(1/(L_b L_u) +
    /// 1/(L_a L_u) - 1/(L_a L_b)), L_y the intersection form.
    fn try_insertion(
        &mut self,
        term: &HyperplaneTerm,
        a: usize,
        b: usize,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> Result<bool, BigZetaError> {
        let union: Vec<bool> = term.forms[a]
            .incidence
            .iter()
            .zip(&term.forms[b].incidence)
            .map(|(&x, &y)| x || y)
            .collect();
        let inter: Vec<bool> = term.forms[a]
            .incidence
            .iter()
            .zip(&term.forms[b].incidence)
            .map(|(&x, &y)| x && y)
            .collect();
        let inter_size = inter.iter().filter(|&&x| x).count() as i64;
        for c in 0..term.forms.len() {
            if c == a || c == b || term.forms[c].incidence != union {
                continue;
            }
            let gamma = term.forms[a].shift + term.forms[b].shift - term.forms[c].shift;
            if gamma < 1 - inter_size {
                continue;
            }
            let mut children = Vec::new();
            for (drop, sign) in [(a, 1), (b, 1), (c, -1)] {
                let mut t = term.clone();
                t.coeff *= rat_i(sign);
                t.forms[drop].power -= 1;
                t.forms.push(Form {
                    incidence: inter.clone(),
                    shift: gamma,
                    power: 1,
                });
                t.forms.retain(|f| f.power > 0);
                children.push(t);
            }
            if children.iter().all(convergent) {
                stack.extend(children);
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Order/tie split of a variable pair sharing no form.
    fn try_stuffle(
        &mut self,
        term: &HyperplaneTerm,
        a: usize,
        b: usize,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> bool {
        let n = term.nvars();
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for u in 0..n {
            if !term.forms[a].incidence[u] || term.forms[b].incidence[u] {
                continue;
            }
            for v in 0..n {
                if !term.forms[b].incidence[v] || term.forms[a].incidence[v] || u == v {
                    continue;
                }
                if term
                    .forms
                    .iter()
                    .all(|f| !(f.incidence[u] && f.incidence[v]))
                {
                    candidates.push((u, v));
                }
            }
        }
        let (u, v) = match candidates.first() {
            Some(&p) => p,
            None => return false,
        };
        // Tie: n_v := n_u.
        {
            let mut t = term.clone();
            t.numerator = t.numerator.substitute(v, &MPoly::var(n, u));
            for f in &mut t.forms {
                if f.incidence[v] {
                    f.incidence[v] = false;
                    f.incidence[u] = true;
                }
            }
            t.numerator = t.numerator.remove_unused_var(v);
            for f in &mut t.forms {
                f.incidence.remove(v);
            }
            stack.push(t);
        }
        // Strict orders: n_big = n_small + n_gap with a fresh gap variable.
        for (small, big) in [(u, v), (v, u)] {
            let mut t = term.clone();
            t.numerator = t.numerator.extend_vars(1);
            for f in &mut t.forms {
                f.incidence.push(false);
            }
            let repl = MPoly::var(n + 1, small).add(&MPoly::var(n + 1, n));
            t.numerator = t.numerator.substitute(big, &repl);
            for f in &mut t.forms {
                if f.incidence[big] {
                    f.incidence[big] = false;
                    f.incidence[small] = true;
                    f.incidence[n] = true;
                }
            }
            t.numerator = t.numerator.remove_unused_var(big);
            for f in &mut t.forms {
                f.incidence.remove(big);
            }
            stack.push(t);
        }
        true
    }

    /// Nested-difference split on a nested pair involving one of the blocked
    /// forms: 1/(L_x L_y) = (1/(L_y - L_x)) (1/L_x - 1/L_y) for S_x inside
    /// S_y, valid when the difference form cannot vanish.
    fn try_diff_split(
        &mut self,
        term: &HyperplaneTerm,
        a: usize,
        b: usize,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> bool {
        let nf = term.forms.len();
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for &x in &[a, b] {
            for y in 0..nf {
                if y == x {
                    continue;
                }
                if subset(&term.forms[x].incidence, &term.forms[y].incidence)
                    && term.forms[x].incidence != term.forms[y].incidence
                {
                    candidates.push((x, y));
                }
            }
        }
        for (x, y) in candidates {
            let diff_inc: Vec<bool> = term.forms[y]
                .incidence
                .iter()
                .zip(&term.forms[x].incidence)
                .map(|(&yy, &xx)| yy && !xx)
                .collect();
            let e = diff_inc.iter().filter(|&&z| z).count() as i64;
            let gamma = term.forms[y].shift - term.forms[x].shift;
            if gamma < 1 - e {
                continue;
            }
            let mut children = Vec::new();
            for (drop, sign) in [(y, 1), (x, -1)] {
                let mut t = term.clone();
                t.coeff *= rat_i(sign);
                t.forms[drop].power -= 1;
                t.forms.push(Form {
                    incidence: diff_inc.clone(),
                    shift: gamma,
                    power: 1,
                });
                t.forms.retain(|f| f.power > 0);
                children.push(t);
            }
            if children.iter().all(convergent) {
                stack.extend(children);
                return true;
            }
        }
        false
    }

    /// Telescoped elimination of one variable: if every form containing v is
    /// `v + R_i` with the rest-forms R_i totally ordered by inclusion and all
    /// differences strictly positive on the lattice, partial fractions in v
    /// separate the factors; order-1 pairs telescope into the finite harmonic
    /// range `sum_{u=1}^{delta} 1/(R_min + u)`, whose variable-length bound
    /// becomes a fresh chained variable by repeated order splitting. This is
    /// the shifted-series recursion lifted to the full lattice.
    fn try_telescope(
        &mut self,
        term: &HyperplaneTerm,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> Result<bool, BigZetaError> {
        let n = term.nvars();
        'vars: for v in (0..n).rev() {
            let mut with_v: Vec<Form> = Vec::new();
            let mut others: Vec<Form> = Vec::new();
            for f in &term.forms {
                if f.incidence[v] {
                    let mut rest = f.clone();
                    rest.incidence[v] = false;
                    with_v.push(rest);
                } else {
                    others.push(f.clone());
                }
            }
            if with_v.len() < 2 {
                continue;
            }
            // rest-forms must be totally ordered with positive gaps
            with_v.sort_by_key(|f| (f.support_size(), f.shift));
            for i in 0..with_v.len() {
                for j in (i + 1)..with_v.len() {
                    let (a, b) = (&with_v[i], &with_v[j]);
                    if !subset(&a.incidence, &b.incidence) {
                        continue 'vars;
                    }
                    if a.incidence == b.incidence && a.shift == b.shift {
                        continue; // merged later
                    }
                    let extra = b.support_size() as i64 - a.support_size() as i64;
                    if extra + b.shift - a.shift < 1 {
                        // The difference form can vanish at the lattice
                        // bottom. Slice one of its variables: the bottom
                        // slice drops the variable, the rest shifts by one,
                        // raising the difference minimum.
                        let t = (0..n)
                            .find(|&t| b.incidence[t] && !a.incidence[t])
                            .expect("strictly larger support");
                        self.slice_variable(term, t, stack);
                        return Ok(true);
                    }
                }
            }
            // merge identical rest-forms
            let mut factors: Vec<Form> = Vec::new();
            for f in with_v {
                match factors.last_mut() {
                    Some(last) if last.incidence == f.incidence && last.shift == f.shift => {
                        last.power += f.power
                    }
                    _ => factors.push(f),
                }
            }
            self.separate_v(term, v, &others, factors, stack)?;
            return Ok(true);
        }
        Ok(false)
    }

    /// Exact range split of one variable: the slice `n_t = 1` (variable
    /// removed, shifts bumped) plus the shifted rest `n_t -> n_t + 1`.
    fn slice_variable(
        &mut self,
        term: &HyperplaneTerm,
        t: usize,
        stack: &mut Vec<HyperplaneTerm>,
    ) {
        // bottom slice
        {
            let mut s = term.clone();
            for f in &mut s.forms {
                if f.incidence[t] {
                    f.incidence[t] = false;
                    f.shift += 1;
                }
            }
            if s.numerator.deg_in(t) > 0 {
                let one = MPoly::constant(s.nvars(), rat_i(1));
                s.numerator = s.numerator.substitute(t, &one);
            }
            s.numerator = s.numerator.remove_unused_var(t);
            for f in &mut s.forms {
                f.incidence.remove(t);
            }
            stack.push(s);
        }
        // shifted rest
        {
            let mut s = term.clone();
            let n = s.nvars();
            for f in &mut s.forms {
                if f.incidence[t] {
                    f.shift += 1;
                }
            }
            if s.numerator.deg_in(t) > 0 {
                let repl = MPoly::var(n, t).add(&MPoly::constant(n, rat_i(1)));
                s.numerator = s.numerator.substitute(t, &repl);
            }
            stack.push(s);
        }
    }

    /// Recursively separate the v-factors `prod (v + R_i)^{k_i}` (R's sorted,
    /// distinct, positive gaps) using
    /// `1/(X^p Y^q) = (1/Delta)(1/(X^p Y^{q-1}) - 1/(X^{p-1} Y^q))`,
    /// with the final (1,1) pair telescoping over v.
    fn separate_v(
        &mut self,
        base: &HyperplaneTerm,
        v: usize,
        others: &[Form],
        factors: Vec<Form>,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> Result<(), BigZetaError> {
        debug_assert!(!factors.is_empty());
        if factors.len() == 1 {
            // single rest-form: v survives in one factor
            let f = &factors[0];
            if f.power < 2 {
                return Err(BigZetaError::NonTerminating(
                    "telescoped elimination left a simple divergent factor".into(),
                ));
            }
            let mut t = base.clone();
            t.forms = others.to_vec();
            let mut inc = f.incidence.clone();
            inc[v] = true;
            t.forms.push(Form {
                incidence: inc,
                shift: f.shift,
                power: f.power,
            });
            stack.push(t);
            return Ok(());
        }
        // take the two smallest rest-forms X = R_a, Y = R_b
        let (a, b) = (factors[0].clone(), factors[1].clone());
        if factors.len() == 2 && a.power == 1 && b.power == 1 {
            // telescoped pair: sum_v (1/(v+Ra) - 1/(v+Rb)) / Delta
            //   = (1/Delta) sum_{u=1}^{Delta} 1/(Ra + u)
            // with Delta = Rb - Ra carried as a denominator form.
            let delta_inc: Vec<bool> = a
                .incidence
                .iter()
                .zip(&b.incidence)
                .map(|(&x, &y)| y && !x)
                .collect();
            let delta_shift = b.shift - a.shift;
            let mut rest_forms = others.to_vec();
            debug_assert!(rest_forms.iter().all(|f| !f.incidence[v]));
            rest_forms.push(Form {
                incidence: delta_inc,
                shift: delta_shift,
                power: 1,
            });
            // harmonic range: a fresh variable u (reusing the v slot) with
            // factor (Ra + u) under the constraint u <= Delta
            let mut t = base.clone();
            t.forms = rest_forms;
            self.emit_range_children(t, v, &a, &b, stack)?;
            return Ok(());
        }
        // reduce the larger power: 1/(X^p Y^q) =
        //   (1/Delta) [1/(X^p Y^{q-1}) - 1/(X^{p-1} Y^q)]
        let delta_inc: Vec<bool> = a
            .incidence
            .iter()
            .zip(&b.incidence)
            .map(|(&x, &y)| y && !x)
            .collect();
        let delta_shift = b.shift - a.shift;
        for (which, sign) in [(1usize, 1i64), (0usize, -1i64)] {
            let mut fs = factors.clone();
            fs[which].power -= 1;
            fs.retain(|f| f.power > 0);
            let mut others2 = others.to_vec();
            others2.push(Form {
                incidence: delta_inc.clone(),
                shift: delta_shift,
                power: 1,
            });
            let mut sub = base.clone();
            sub.coeff = &base.coeff * rat_i(sign);
            self.separate_v(&sub, v, &others2, fs, stack)?;
        }
        Ok(())
    }

    /// Children of the telescoped pair: substitute away the variable v and
    /// emit `sum_{1 <= u <= Delta} 1/(Ra + u)` by splitting the bound
    /// `u <= sum_{T} n + gamma` one variable at a time.
    fn emit_range_children(
        &mut self,
        template: HyperplaneTerm,
        v: usize,
        ra: &Form,
        rb: &Form,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> Result<(), BigZetaError> {
        // variable v is gone; reuse its slot as the fresh range variable u.
        let n = template.nvars();
        let t_set: Vec<usize> = (0..n)
            .filter(|&i| i != v && rb.incidence[i] && !ra.incidence[i])
            .collect();
        let gamma = rb.shift - ra.shift;
        // u-factor: (Ra + u): support = Ra's support plus the u slot
        let mut u_inc = ra.incidence.clone();
        u_inc[v] = true;
        let u_form = Form {
            incidence: u_inc,
            shift: ra.shift,
            power: 1,
        };
        let mut base = template;
        base.forms.push(u_form);
        self.split_range(base, v, &t_set, gamma, stack)
    }

    /// Emit the region `1 <= u <= sum_{t in T} n_t + gamma` as exact
    /// substitutions: compare u with one n_t at a time.
    fn split_range(
        &mut self,
        term: HyperplaneTerm,
        u: usize,
        t_set: &[usize],
        gamma: i64,
        stack: &mut Vec<HyperplaneTerm>,
    ) -> Result<(), BigZetaError> {
        if t_set.is_empty() {
            // finite range 1..=gamma: enumerate concrete u values
            if gamma > 64 {
                return Err(BigZetaError::NonTerminating(
                    "oversized constant harmonic range".into(),
                ));
            }
            for val in 1..=gamma.max(0) {
                let mut t = term.clone();
                // substitute u := val in every form, then drop the slot
                for f in &mut t.forms {
                    if f.incidence[u] {
                        f.incidence[u] = false;
                        f.shift += val;
                    }
                }
                if t.numerator.deg_in(u) > 0 {
                    let constant = MPoly::constant(t.nvars(), rat_i(val));
                    t.numerator = t.numerator.substitute(u, &constant);
                }
                t.numerator = t.numerator.remove_unused_var(u);
                for f in &mut t.forms {
                    f.incidence.remove(u);
                }
                stack.push(t);
            }
            return Ok(());
        }
        let tv = t_set[0];
        // region u <= n_tv: substitute n_tv = u + w - 1 with a fresh w >= 1
        // reusing... we need a new variable slot; extend by one.
        {
            let mut t = term.clone();
            let n = t.nvars();
            t.numerator = t.numerator.extend_vars(1);
            for f in &mut t.forms {
                f.incidence.push(false);
            }
            // n_tv -> u + w - 1 (w is the new last variable)
            let repl = MPoly::var(n + 1, u)
                .add(&MPoly::var(n + 1, n))
                .add(&MPoly::constant(n + 1, rat_i(-1)));
            t.numerator = t.numerator.substitute(tv, &repl);
            for f in &mut t.forms {
                if f.incidence[tv] {
                    f.incidence[tv] = false;
                    f.incidence[u] = true;
                    f.incidence[n] = true;
                    f.shift -= 1;
                }
            }
            // n_tv is gone
            t.numerator = t.numerator.remove_unused_var(tv);
            for f in &mut t.forms {
                f.incidence.remove(tv);
            }
            stack.push(t);
        }
        // region u > n_tv: u = n_tv + u', constraint u' <= rest + gamma
        {
            let mut t = term.clone();
            let n = t.nvars();
            // u -> n_tv + u' : keep the same slot for u'
            let repl = MPoly::var(n, tv).add(&MPoly::var(n, u));
            t.numerator = t.numerator.substitute(u, &repl);
            for f in &mut t.forms {
                if f.incidence[u] {
                    f.incidence[tv] = true;
                    // slot u now holds u'
                }
            }
            self.split_range(t, u, &t_set[1..], gamma, stack)?;
        }
        Ok(())
    }

    /// Convert a chain-support term into a strictly increasing chain series.
    fn terminal(
        &mut self,
        term: HyperplaneTerm,
        supports: Vec<Vec<bool>>,
    ) -> Result<MzvCombination, BigZetaError> {
        let m = supports.len();
        let n = term.nvars();
        // groups: G_q = R_q minus R_{q-1}
        let mut groups: Vec<Vec<usize>> = Vec::with_capacity(m);
        for q in 0..m {
            let mut g = Vec::new();
            for v in 0..n {
                if supports[q][v] && (q == 0 || !supports[q - 1][v]) {
                    g.push(v);
                }
            }
            if g.is_empty() {
                return Err(BigZetaError::NonTerminating("empty chain group".into()));
            }
            groups.push(g);
        }
        // offsets o_q = sum_{p<=q} (|G_p| - 1)
        let mut offsets = Vec::with_capacity(m);
        let mut acc = 0i64;
        for g in &groups {
            acc += g.len() as i64 - 1;
            offsets.push(acc);
        }
        // factors on the chain variables
        let mut factors: Vec<Vec<(i64, u32)>> = vec![Vec::new(); m];
        for f in &term.forms {
            let q = supports
                .iter()
                .position(|s| *s == f.incidence)
                .expect("chain support");
            let shift = f.shift + offsets[q];
            match factors[q].iter_mut().find(|e| e.0 == shift) {
                Some(e) => e.1 += f.power,
                None => factors[q].push((shift, f.power)),
            }
        }
        // numerator: fiber-sum each monomial over the gap compositions
        let mut numerator = MPoly::zero(m);
        for (e, c) in term.numerator.terms() {
            let mut acc_poly = MPoly::constant(m, c.clone());
            for (q, g) in groups.iter().enumerate() {
                let exps: Vec<u32> = g.iter().map(|&v| e[v]).collect();
                let fiber = fiber_sum_poly(&exps);
                // gap_q = x_q - x_{q-1} + (|G_q| - 1)
                let mut gap = MPoly::var(m, q);
                if q > 0 {
                    gap = gap.add(&MPoly::var(m, q - 1).scale(&rat_i(-1)));
                }
                gap = gap.add(&MPoly::constant(m, rat_i(groups[q].len() as i64 - 1)));
                let mut comp = MPoly::zero(m);
                let mut pw = MPoly::one(m);
                for fc in fiber.coeffs() {
                    if !fc.is_zero() {
                        comp = comp.add(&pw.scale(fc));
                    }
                    pw = pw.mul(&gap);
                }
                acc_poly = acc_poly.mul(&comp);
            }
            numerator = numerator.add(&acc_poly);
        }
        let chain = ChainTerm::new(term.coeff, numerator, factors);
        self.series.reduce(chain).map_err(|e| match e {
            SeriesError::Divergent => BigZetaError::Divergent,
            other => BigZetaError::Series(other),
        })
    }
}

/// Solve `e_v = sum_j lambda_j * incidence_j` over Q, using only forms with
/// positive power; returns the lambdas and `q = -sum lambda_j c_j` so that
/// `n_v = sum lambda_j L_j + q`.
fn solve_variable(forms: &[Form], nvars: usize, v: usize) -> Option<(Vec<(usize, Rat)>, Rat)> {
    use num_traits::Zero;
    let usable: Vec<usize> = (0..forms.len()).filter(|&j| forms[j].power >= 1).collect();
    // Gaussian elimination on the transposed system: rows are variables,
    // columns are usable forms plus the target vector e_v.
    let m = usable.len();
    let mut a: Vec<Vec<Rat>> = (0..nvars)
        .map(|r| {
            let mut row: Vec<Rat> = usable
                .iter()
                .map(|&j| {
                    if forms[j].incidence[r] {
                        rat_i(1)
                    } else {
                        rat_i(0)
                    }
                })
                .collect();
            row.push(if r == v { rat_i(1) } else { rat_i(0) });
            row
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..m {
        let Some(pr) = (rank..nvars).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = rat_i(1) / a[rank][col].clone();
        for x in a[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..nvars {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for cx in 0..=m {
                    let delta = &a[rank][cx] * &f;
                    a[r][cx] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nvars {
            break;
        }
    }
    // consistency: the target must be zero outside the pivot rows
    for r in rank..nvars {
        if !a[r][m].is_zero() {
            return None;
        }
    }
    let mut lambdas: Vec<(usize, Rat)> = Vec::new();
    let mut q = Rat::zero();
    for (row, &col) in pivot_cols.iter().enumerate() {
        let lambda = a[row][m].clone();
        if !lambda.is_zero() {
            q -= &lambda * rat_i(forms[usable[col]].shift);
            lambdas.push((usable[col], lambda));
        }
    }
    Some((lambdas, q))
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !x || y)
}

fn disjoint(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !(x && y))
}

/// If the distinct supports form a chain, return them in increasing order.
fn chain_order(forms: &[Form]) -> Option<Vec<Vec<bool>>> {
    let mut distinct: Vec<Vec<bool>> = Vec::new();
    for f in forms {
        if !distinct.contains(&f.incidence) {
            distinct.push(f.incidence.clone());
        }
    }
    distinct.sort_by_key(|s| s.iter().filter(|&&x| x).count());
    for w in distinct.windows(2) {
        if !subset(&w[0], &w[1]) {
            return None;
        }
    }
    Some(distinct)
}

/// Incomparable form pairs, smallest combined support first.
fn incomparable_pairs(forms: &[Form]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..forms.len() {
        for b in (a + 1)..forms.len() {
            let ia = &forms[a].incidence;
            let ib = &forms[b].incidence;
            if subset(ia, ib) || subset(ib, ia) {
                continue;
            }
            out.push((forms[a].support_size() + forms[b].support_size(), a, b));
        }
    }
    out.sort();
    out.into_iter().map(|(_, a, b)| (a, b)).collect()
}
