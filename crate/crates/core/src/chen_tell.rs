//! Layered circuits as sequences of low-degree polynomials, the hitting set
//! built from them, and the layer-by-layer reconstruction.
//!
//! Gates are numbered from 1 within a layer and gate `g` sits at the grid
//! point `id(g) ∈ H^m`, the base-`h` digits of `g − 1` with the most
//! significant digit first. `H` is the first `h` field elements. All
//! polynomials take `3m` variables; unused trailing variables are dummies.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::matrix::{lex_index, lex_point};
use crate::algebra::{Fe, Field, TruthTable};
use crate::decoding::pcorr::FixedPcorr;
use crate::error::{Error, Result};
use crate::genmatrix::{build_candidate_set, CandidateSet};
use crate::hitting::HittingSet;
use crate::su_hsg::SuParams;
use crate::su_modified::{modified_reconstruct, Avoider, CombinedHittingSet, ModifiedConfig, SuContext};

/// Gate `w` of layer `layer` is the NAND of gates `u` and `v` of the layer
/// below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Wire {
    pub layer: usize,
    pub w: usize,
    pub u: usize,
    pub v: usize,
}

/// A layered NAND circuit. Layer 0 holds the `n_in` inputs, the outputs
/// are the first `n_out` gates of layer `depth`. A gate that no wire feeds
/// is constant 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCircuit {
    pub width: usize,
    pub depth: usize,
    pub n_in: usize,
    pub n_out: usize,
    wires: Vec<Wire>,
}

impl LayeredCircuit {
    pub fn new(width: usize, depth: usize, n_in: usize, n_out: usize, wires: Vec<Wire>) -> Result<Self> {
        if width == 0 || depth == 0 || n_in > width || n_out == 0 || n_out > width {
            return Err(Error::Usage(format!("bad circuit shape {width} {depth} {n_in} {n_out}")));
        }
        let mut fed = HashMap::new();
        for w in &wires {
            let ok = (1..=depth).contains(&w.layer)
                && [w.w, w.u, w.v].iter().all(|g| (1..=width).contains(g));
            if !ok {
                return Err(Error::Usage(format!("wire {w:?} out of range")));
            }
            if fed.insert((w.layer, w.w), ()).is_some() {
                return Err(Error::Usage(format!("gate {} of layer {} fed twice", w.w, w.layer)));
            }
        }
        Ok(LayeredCircuit { width, depth, n_in, n_out, wires })
    }

    /// Parses the text format: a header `width depth n_in n_out`, then one
    /// line `layer w u v` per wire. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let nums = |l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
                .collect()
        };
        let head = nums(lines.next().ok_or_else(|| Error::Parse("empty circuit file".into()))?)?;
        let [width, depth, n_in, n_out] = head[..] else {
            return Err(Error::Parse("header needs four numbers".into()));
        };
        let mut wires = Vec::new();
        for l in lines {
            let [layer, w, u, v] = nums(l)?[..] else {
                return Err(Error::Parse(format!("wire line {l:?} needs four numbers")));
            };
            wires.push(Wire { layer, w, u, v });
        }
        Self::new(width, depth, n_in, n_out, wires)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.width, self.depth, self.n_in, self.n_out);
        for w in &self.wires {
            let _ = writeln!(s, "{} {} {} {}", w.layer, w.w, w.u, w.v);
        }
        s
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    /// Every gate of every layer fed by two random gates of the layer below
    /// (inputs only, for layer 1).
    pub fn random<R: Rng + ?Sized>(width: usize, depth: usize, n_in: usize, n_out: usize, rng: &mut R) -> Result<Self> {
        let mut wires = Vec::new();
        for layer in 1..=depth {
            let below = if layer == 1 { n_in.max(1) } else { width };
            for w in 1..=width {
                wires.push(Wire { layer, w, u: rng.gen_range(1..=below), v: rng.gen_range(1..=below) });
            }
        }
        Self::new(width, depth, n_in, n_out, wires)
    }

    /// Gate values of all layers.
    pub fn evaluate(&self, input: &[bool]) -> Vec<Vec<bool>> {
        let mut layers = vec![vec![false; self.width]];
        for (g, &b) in input.iter().take(self.n_in).enumerate() {
            layers[0][g] = b;
        }
        for layer in 1..=self.depth {
            let below = &layers[layer - 1];
            let mut cur = vec![false; self.width];
            for w in self.wires.iter().filter(|w| w.layer == layer) {
                cur[w.w - 1] = !(below[w.u - 1] && below[w.v - 1]);
            }
            layers.push(cur);
        }
        layers
    }

    pub fn output(&self, input: &[bool]) -> Vec<bool> {
        self.evaluate(input)[self.depth][..self.n_out].to_vec()
    }
}

/// The polynomials `P_1 = α̂_0`, then `α̂_(i,0), …, α̂_(i,2m)` for each layer
/// `i`, of a circuit on a fixed input.
pub struct PolyLadder {
    field: Arc<Field>,
    h: usize,
    m: usize,
    circuit: LayeredCircuit,
    input: Vec<bool>,
    /// `1 / Π_(b ∈ H, b ≠ a) (a − b)`.
    denoms: Vec<Fe>,
    /// `id(g)` for `g = 1..=width`.
    ids: Vec<Vec<usize>>,
}

impl PolyLadder {
    pub fn new(field: &Arc<Field>, h: usize, m: usize, circuit: LayeredCircuit, input: &[bool]) -> Result<Self> {
        let f = &**field;
        if h < 2 || h > f.size() {
            return Err(Error::Usage(format!("h = {h} must lie in 2..={}", f.size())));
        }
        if h.checked_pow(m as u32).is_none_or(|c| c < circuit.width) {
            return Err(Error::Usage(format!("h^m is smaller than the width {}", circuit.width)));
        }
        if input.len() != circuit.n_in {
            return Err(Error::Usage(format!("input has {} bits, circuit expects {}", input.len(), circuit.n_in)));
        }
        let denoms = (0..h as u32)
            .map(|a| {
                let d = (0..h as u32).filter(|&b| b != a).fold(Fe::ONE, |acc, b| f.mul(acc, Fe(a) + Fe(b)));
                f.inv(d).expect("distinct elements")
            })
            .collect();
        let ids = (1..=circuit.width).map(|g| id_digits(h, m, g)).collect();
        Ok(PolyLadder { field: field.clone(), h, m, circuit, input: input.to_vec(), denoms, ids })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn circuit(&self) -> &LayeredCircuit {
        &self.circuit
    }

    pub fn input(&self) -> &[bool] {
        &self.input
    }

    /// Number of variables of every polynomial, `3m`.
    pub fn vars(&self) -> usize {
        3 * self.m
    }

    /// `d' = (2m+1)·d_D + 1`.
    pub fn d_prime(&self) -> usize {
        (2 * self.m + 1) * self.circuit.depth + 1
    }

    /// Total degree bound `5·m·(h−1)`: `Φ̂_i` has degree `3m(h−1)` and each
    /// copy of `α̂_(i−1)` adds `m(h−1)`.
    pub fn delta(&self) -> usize {
        5 * self.m * (self.h - 1)
    }

    /// `id(g)` as a point of `H^m`.
    pub fn id(&self, g: usize) -> Vec<Fe> {
        id_digits(self.h, self.m, g).into_iter().map(|d| Fe(d as u32)).collect()
    }

    /// Layer `i` and sumcheck index `j` of `P_q`, `q >= 2`.
    pub fn split(&self, q: usize) -> (usize, usize) {
        let per = 2 * self.m + 1;
        ((q - 2) / per + 1, (q - 2) % per)
    }

    /// `L_a(w) = Π_(b ≠ a) (w − b)/(a − b)` for every `a ∈ H`.
    fn basis(&self, w: Fe, out: &mut [Fe]) {
        let f = &*self.field;
        for (a, o) in out.iter_mut().enumerate() {
            let mut num = Fe::ONE;
            for b in 0..self.h as u32 {
                if b != a as u32 {
                    num = f.mul(num, w + Fe(b));
                }
            }
            *o = f.mul(num, self.denoms[a]);
        }
    }

    fn bases(&self, x: &[Fe]) -> Vec<Vec<Fe>> {
        x.iter()
            .map(|&w| {
                let mut b = vec![Fe::ZERO; self.h];
                self.basis(w, &mut b);
                b
            })
            .collect()
    }

    /// `δ_(id(g))` at the point whose coordinate bases are `bases`.
    fn delta_at(&self, bases: &[Vec<Fe>], g: usize) -> Fe {
        let f = &*self.field;
        self.ids[g - 1].iter().zip(bases).fold(Fe::ONE, |acc, (&d, b)| f.mul(acc, b[d]))
    }

    /// `P_1(w) = α̂_0(w)`, reading the first `m` coordinates.
    pub fn base_eval(&self, w: &[Fe]) -> Fe {
        let bases = self.bases(&w[..self.m]);
        let mut acc = Fe::ZERO;
        for (g, &b) in self.input.iter().enumerate() {
            if b {
                acc = acc + self.delta_at(&bases, g + 1);
            }
        }
        acc
    }

    /// `Φ̂_i(w, u, v)`, the delta extension of the wiring of layer `i`.
    pub fn phi_hat(&self, i: usize, x: &[Fe]) -> Fe {
        let f = &*self.field;
        let m = self.m;
        let bases = self.bases(&x[..3 * m]);
        let mut acc = Fe::ZERO;
        for w in self.circuit.wires.iter().filter(|w| w.layer == i) {
            let a = self.delta_at(&bases[..m], w.w);
            let b = self.delta_at(&bases[m..2 * m], w.u);
            let c = self.delta_at(&bases[2 * m..], w.v);
            acc = acc + f.mul(a, f.mul(b, c));
        }
        acc
    }

    /// `P_q(x)` from an oracle for `P_(q−1)`, `q >= 2`.
    pub fn dsr_eval(&self, q: usize, x: &[Fe], prev: &dyn Fn(&[Fe]) -> Fe) -> Fe {
        let f = &*self.field;
        let m = self.m;
        let (i, j) = self.split(q);
        let mut y = vec![Fe::ZERO; 3 * m];
        if j == 0 {
            let phi = self.phi_hat(i, x);
            if phi.is_zero() {
                return Fe::ZERO;
            }
            y[..m].copy_from_slice(&x[m..2 * m]);
            let a = prev(&y);
            y[..m].copy_from_slice(&x[2 * m..3 * m]);
            let b = prev(&y);
            return f.mul(phi, Fe::ONE + f.mul(a, b));
        }
        // α̂_(i,j)(w, σ_1..σ_(2m−j)) sums α̂_(i,j−1) over the next σ in H
        let free = 3 * m - j;
        y[..free].copy_from_slice(&x[..free]);
        let mut acc = Fe::ZERO;
        for a in 0..self.h as u32 {
            y[free] = Fe(a);
            acc = acc + prev(&y);
        }
        acc
    }

    /// `P_q(x)` through the chain of reductions down to `Base`, with no
    /// tables.
    pub fn chain_eval(&self, q: usize, x: &[Fe]) -> Fe {
        if q == 1 {
            self.base_eval(x)
        } else {
            self.dsr_eval(q, x, &|y| self.chain_eval(q - 1, y))
        }
    }

    /// Truth table of `P_1`.
    pub fn base_table(&self) -> Vec<Fe> {
        let p = self.field.size();
        let n = p.pow(self.vars() as u32);
        (0..n).map(|idx| self.base_eval(&lex_point(p, self.vars(), idx))).collect()
    }

    /// Truth table of `P_q` from the table of `P_(q−1)`.
    pub fn next_table(&self, q: usize, prev: &[Fe]) -> Vec<Fe> {
        let p = self.field.size();
        let lookup = |y: &[Fe]| prev[lex_index(p, y)];
        (0..prev.len()).map(|idx| self.dsr_eval(q, &lex_point(p, self.vars(), idx), &lookup)).collect()
    }

    /// Truth tables of `P_1, …, P_q`, bottom up.
    pub fn tables(&self, q: usize) -> Vec<Vec<Fe>> {
        let mut out = vec![self.base_table()];
        for r in 2..=q {
            let next = self.next_table(r, out.last().unwrap());
            out.push(next);
        }
        out
    }

    pub fn truth_table(&self, values: Vec<Fe>) -> Result<TruthTable> {
        TruthTable::new(&self.field, self.vars(), Some(self.delta()), values)
    }

    /// Output bit `i` (1-based) read from an oracle for `P_(d')` at
    /// `(id(i), 0^(2m))`.
    pub fn faithful_output(&self, top: &dyn Fn(&[Fe]) -> Fe, i: usize) -> Result<bool> {
        let mut x = self.id(i);
        x.resize(3 * self.m, Fe::ZERO);
        match top(&x) {
            Fe::ZERO => Ok(false),
            Fe::ONE => Ok(true),
            v => Err(Error::Domain(format!("output {i} reads the non-Boolean value {}", v.0))),
        }
    }
}

fn id_digits(h: usize, m: usize, g: usize) -> Vec<usize> {
    let mut v = g - 1;
    let mut d = vec![0; m];
    for c in (0..m).rev() {
        d[c] = v % h;
        v /= h;
    }
    d
}

const NICE: [u32; 3] = [2, 6, 18];

/// Parameters of the targeted generator.
#[derive(Clone, Debug, Serialize)]
pub struct CtParams {
    pub n: usize,
    pub log_t: u32,
    pub d: usize,
    pub big_m: usize,
    pub rho: f64,
    pub h: usize,
    pub p: usize,
    pub m: usize,
    pub relaxed: bool,
}

impl CtParams {
    /// `h` the smallest nice power at least `max(M, log T)`, `p` the next
    /// nice power, `m = ceil(log T / log h)`.
    pub fn paper(n: usize, log_t: u32, d: usize, big_m: usize, rho: f64) -> Result<Self> {
        let need = big_m.max(log_t as usize) as u64;
        let k = NICE
            .iter()
            .position(|&k| 1u64 << k >= need)
            .ok_or_else(|| Error::Precondition(format!("no nice power covers {need}")))?;
        let kp = *NICE.get(k + 1).ok_or_else(|| Error::Precondition("no larger nice power".into()))?;
        let h = 1usize << NICE[k];
        let m = (log_t as usize).div_ceil(NICE[k] as usize).max(1);
        Ok(CtParams { n, log_t, d, big_m, rho, h, p: 1 << kp, m, relaxed: false })
    }

    /// Explicit desk-scale parameters.
    pub fn toy(h: usize, p: usize, m: usize, big_m: usize) -> Self {
        CtParams { n: 0, log_t: 0, d: 0, big_m, rho: 1.0, h, p, m, relaxed: true }
    }

    /// Violations of `log T <= h < p <= h^27 <= T`.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let lh = (self.h as f64).log2();
        if (self.log_t as f64) > self.h as f64 {
            v.push(format!("log T = {} exceeds h = {}", self.log_t, self.h));
        }
        if self.h >= self.p {
            v.push(format!("h = {} is not below p = {}", self.h, self.p));
        }
        if (self.p as f64).log2() > 27.0 * lh {
            v.push(format!("p = {} exceeds h^27", self.p));
        }
        if 27.0 * lh > self.log_t as f64 {
            v.push(format!("h^27 exceeds T = 2^{}", self.log_t));
        }
        v
    }

    pub fn delta(&self) -> usize {
        5 * self.m * (self.h - 1)
    }

    /// Parameters of the per-layer generator, over `3m` variables.
    pub fn layer_params(&self) -> Result<SuParams> {
        if self.relaxed {
            SuParams::relaxed(self.p, 3 * self.m, self.big_m, self.delta())
        } else {
            SuParams::new(self.p, 3 * self.m, self.big_m, self.delta())
        }
    }
}

/// The union over `q ∈ [d']` of the combined generator applied to `P_q`.
/// Layer tables are computed on first use.
pub struct CtHittingSet<'a> {
    ladder: &'a PolyLadder,
    candidates: CandidateSet,
    big_m: usize,
    per_layer: u64,
    tables: RefCell<Vec<Vec<Fe>>>,
    current: RefCell<Option<(usize, CombinedHittingSet)>>,
}

impl<'a> CtHittingSet<'a> {
    pub fn layer(&self, q: usize) -> Result<CombinedHittingSet> {
        let values = self.table(q);
        let table = Arc::new(self.ladder.truth_table(values)?);
        CombinedHittingSet::new(&table, &self.candidates, self.big_m)
    }

    fn table(&self, q: usize) -> Vec<Fe> {
        let mut tables = self.tables.borrow_mut();
        if tables.is_empty() {
            tables.push(self.ladder.base_table());
        }
        while tables.len() < q {
            let next = self.ladder.next_table(tables.len() + 1, tables.last().unwrap());
            tables.push(next);
        }
        tables[q - 1].clone()
    }

    pub fn per_layer(&self) -> u64 {
        self.per_layer
    }
}

impl HittingSet for CtHittingSet<'_> {
    fn bits(&self) -> usize {
        self.big_m
    }

    fn count(&self) -> u64 {
        self.per_layer * self.ladder.d_prime() as u64
    }

    fn get(&self, idx: u64) -> u64 {
        let q = (idx / self.per_layer) as usize + 1;
        let mut cur = self.current.borrow_mut();
        if cur.as_ref().is_none_or(|(l, _)| *l != q) {
            let layer = self.layer(q).expect("layer tables fit the checked cap");
            *cur = Some((q, layer));
        }
        cur.as_ref().unwrap().1.get(idx % self.per_layer)
    }
}

/// The targeted generator for `ladder`. Errors if one layer table would
/// take more than `cap_bytes`.
pub fn ct_generate<'a>(ladder: &'a PolyLadder, big_m: usize, cap_bytes: u64) -> Result<CtHittingSet<'a>> {
    let f = ladder.field();
    let vars = ladder.vars();
    let points = (f.size() as u64)
        .checked_pow(vars as u32)
        .ok_or_else(|| Error::Resource("p^(3m) overflows".into()))?;
    if points * 4 > cap_bytes {
        return Err(Error::Resource(format!("a layer table needs {} bytes, cap is {cap_bytes}", points * 4)));
    }
    let s = f.k() as u64 * vars as u64;
    if 2 * s > 62 {
        return Err(Error::Resource(format!("CryptoG index width 2s = {} is too wide", 2 * s)));
    }
    let candidates = build_candidate_set(f, vars)?;
    let hsu = vars as u64 * points * f.size() as u64;
    let per_layer = candidates.len() as u64 * (hsu + (1u64 << (2 * s)));
    Ok(CtHittingSet {
        ladder,
        candidates,
        big_m,
        per_layer,
        tables: RefCell::new(Vec::new()),
        current: RefCell::new(None),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CtConfig {
    pub su: ModifiedConfig,
    /// Verification samples per layer are `c1·m·log p`.
    pub c1: usize,
    /// Votes of the majority self-correction forming `E_q`.
    pub votes: usize,
}

impl CtConfig {
    pub fn for_params(ladder: &PolyLadder, layer: &SuParams) -> Self {
        let mut su = ModifiedConfig::for_params(layer);
        su.tabulate = true;
        su.walk = crate::su_hsg::WalkMode::Sweep;
        let lp = ladder.field().k() as usize;
        CtConfig { su, c1: 8, votes: ladder.m() * lp }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CtOutcome {
    pub output: Option<Vec<bool>>,
    /// Index `q` of the polynomial whose reconstruction stopped the run.
    pub failed_at: Option<usize>,
    pub reason: Option<String>,
    /// Learning steps spent per layer.
    pub learn_calls: Vec<u64>,
}

/// Reconstructs `P_2, …, P_(d')` in turn from a distinguisher, then reads
/// the outputs off `P_(d')`. The result is the circuit's output or `None`.
pub fn ct_reconstruct<R: Rng + ?Sized>(
    ladder: &PolyLadder,
    ctx: &SuContext,
    avoider: Avoider<'_>,
    layer: &SuParams,
    cfg: &CtConfig,
    rng: &mut R,
) -> Result<CtOutcome> {
    let f = &**ladder.field();
    let p = f.size();
    let vars = ladder.vars();
    if ctx.m != vars || layer.m != vars || layer.p != p {
        return Err(Error::Usage("layer parameters must have p and 3m variables of the ladder".into()));
    }
    let stop = |q: usize, reason: &str, calls: Vec<u64>| CtOutcome {
        output: None,
        failed_at: Some(q),
        reason: Some(reason.to_string()),
        learn_calls: calls,
    };
    let samples = cfg.c1 * ladder.m() * f.k() as usize;
    let mut calls = Vec::new();
    let mut prev = ladder.base_table();
    for q in 2..=ladder.d_prime() {
        let p_tilde = ladder.next_table(q, &prev);
        let oracle = |x: &[Fe]| p_tilde[lex_index(p, x)];
        let out = modified_reconstruct(ctx, &oracle, avoider, layer, &cfg.su, rng)?;
        let Some(circuit) = out.circuit else {
            return Ok(stop(q, "layer reconstruction failed", calls));
        };
        calls.push(circuit.learn_calls());
        let e_tilde = circuit.tabulate();
        let verified = (0..samples).all(|_| {
            let idx = rng.gen_range(0..e_tilde.len());
            e_tilde[idx] == p_tilde[idx]
        });
        if !verified {
            return Ok(stop(q, "sample verification failed", calls));
        }
        let corrector = FixedPcorr::new(f, vars, layer.delta, cfg.votes, rng);
        prev = corrector.tabulate(f, vars, &e_tilde);
    }
    let top = |x: &[Fe]| prev[lex_index(p, x)];
    let mut bits = Vec::with_capacity(ladder.circuit().n_out);
    for i in 1..=ladder.circuit().n_out {
        match ladder.faithful_output(&top, i) {
            Ok(b) => bits.push(b),
            Err(_) => return Ok(stop(ladder.d_prime(), "non-Boolean output", calls)),
        }
    }
    Ok(CtOutcome { output: Some(bits), failed_at: None, reason: None, learn_calls: calls })
}
