//! One function per subcommand. Each returns the report; hex streams go to
//! the writer it is handed.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use hsgen::algebra::selftest::field_selftest;
use hsgen::algebra::{Fe, Field, MultiPoly, TruthTable, UniPoly};
use hsgen::bootstrap::{
    algorithm_b, bit_string, desk_registry, number, schedule_compute, CaseOneOracle, LengthLadder, Primality, Registry,
};
use hsgen::chen_tell::{ct_generate, ct_reconstruct, CtConfig, CtParams, LayeredCircuit, PolyLadder};
use hsgen::decoding::sudan::{agreement, brute_force_decode, sudan_list_decode, AgreementThreshold};
use hsgen::genmatrix::build_candidate_set;
use hsgen::hitting::{hex_string, HittingSet};
use hsgen::oracle::{Complement, Constant, Distinguisher, KeyedRandom};
use hsgen::rng::{self, keyed_hash};
use hsgen::su_hsg::{hsu_generate, table_oracle, SuParams};
use hsgen::su_modified::{modified_generate, modified_reconstruct, Avoider, ModifiedConfig, SuContext};
use hsgen::{Error, Result};

use crate::property;
use crate::report::{rate, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Regime {
    Paper,
    Relaxed,
}

impl Regime {
    fn name(self) -> &'static str {
        match self {
            Regime::Paper => "paper",
            Regime::Relaxed => "relaxed",
        }
    }
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct Common {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Trials, seeds or self-test rounds; each subcommand has its own default.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_enum, default_value_t = Regime::Relaxed)]
    pub regime: Regime,
    /// Largest table or hitting set the run may hold in memory.
    #[arg(long = "cap-bytes", default_value_t = 1 << 30)]
    pub cap_bytes: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where hex streams go; `-` is standard output.
    #[arg(long)]
    pub stream: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum AvoiderKind {
    /// Perfect predictor and inverter fixtures.
    Planted,
    /// A keyed pseudo-random predicate of the given density.
    Random,
    /// Accepts everything.
    Constant,
    /// Accepts exactly the strings outside the hitting set.
    Complement,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SelfTestOpts {
    #[command(flatten)]
    pub common: Common,
    /// Largest extension degree tested.
    #[arg(long = "max-k", default_value_t = 18)]
    pub max_k: u32,
}

pub fn field_selftest_run(o: &SelfTestOpts) -> Result<RunReport> {
    let rounds = o.common.trials.unwrap_or(10_000);
    let mut report = RunReport::new("field-selftest", o.common.regime.name(), o.common.seed, json!({ "rounds": rounds, "max_k": o.max_k }));
    let mut failures = 0;
    for k in 1..=o.max_k {
        let f = Field::gf(k)?;
        let mut r = rng::stream(o.common.seed, "field-selftest", k as u64);
        let t = field_selftest(&f, rounds, &mut r);
        failures += t.failures + (!t.modulus_irreducible) as usize;
        report.trials.push(serde_json::to_value(&t).expect("serializable"));
    }
    let nice: Vec<Value> = [2u32, 6, 18]
        .iter()
        .map(|&k| {
            let poly = 1u64 << k | 1u64 << (k / 2) | 1;
            json!({ "k": k, "irreducible": hsgen::algebra::field::is_irreducible_bitpoly(poly) })
        })
        .collect();
    let nice_ok = nice.iter().all(|v| v["irreducible"] == true);
    report.aggregate = json!({ "failures": failures, "nice_moduli": nice, "passed": failures == 0 && nice_ok });
    Ok(report)
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SudanOpts {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 8)]
    pub p: u64,
    /// Degree bound of the planted polynomial.
    #[arg(long, default_value_t = 2)]
    pub delta: usize,
}

fn coeff_key(g: &UniPoly) -> Vec<u32> {
    g.coeffs().iter().map(|c| c.0).collect()
}

pub fn sudan_bench(o: &SudanOpts) -> Result<RunReport> {
    let f = Field::of_size(o.p)?;
    let p = f.size();
    let d = o.delta;
    let a = AgreementThreshold::minimal(p, d).a;
    if a > p {
        return Err(Error::Precondition(format!("degree {d} cannot be decoded from {p} pairs")));
    }
    let trials = o.common.trials.unwrap_or(200);
    let oracle = (p as f64).powi(d as i32 + 1) <= 65536.0;
    let mut report = RunReport::new(
        "sudan-bench",
        o.common.regime.name(),
        o.common.seed,
        json!({ "p": p, "degree": d, "pairs": p, "agreement": a, "brute_force_oracle": oracle }),
    );
    let mut outcomes = Vec::new();
    let mut max_list = 0;
    for t in 0..trials {
        let mut r = rng::stream(o.common.seed, "sudan-bench", t as u64);
        let g = UniPoly::random(&f, d, &mut r);
        let mut xs: Vec<Fe> = f.elements().collect();
        xs.shuffle(&mut r);
        let agree = r.gen_range(a..=p);
        let pairs: Vec<(Fe, Fe)> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let y = g.eval(&f, x);
                (x, if i < agree { y } else { y + f.random_nonzero(&mut r) })
            })
            .collect();
        let list = sudan_list_decode(&f, &pairs, d, a)?;
        let found = list.iter().any(|h| coeff_key(h) == coeff_key(&g));
        let sound = list.iter().all(|h| agreement(&f, h, &pairs) >= a && h.degree().is_none_or(|e| e <= d));
        let bound = list.len() <= 2 * p / a;
        let matches = if oracle {
            let mine: BTreeSet<Vec<u32>> = list.iter().map(coeff_key).collect();
            let brute: BTreeSet<Vec<u32>> = brute_force_decode(&f, &pairs, d, a).iter().map(coeff_key).collect();
            Some(mine == brute)
        } else {
            None
        };
        max_list = max_list.max(list.len());
        let ok = found && sound && bound && matches != Some(false);
        outcomes.push(if ok { "exact" } else { "mismatch" });
        report.trials.push(json!({
            "trial": t, "agreement": agree, "list_size": list.len(), "planted_found": found,
            "oracle_match": matches, "outcome": outcomes[t],
        }));
    }
    report.aggregate = json!({ "exact_rate": rate(&outcomes, "exact"), "max_list_size": max_list, "list_bound": 2 * p / a });
    Ok(report)
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SuOpts {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 16)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long = "M", default_value_t = 4)]
    pub big_m: usize,
    /// Total degree bound of the random polynomial.
    #[arg(long, default_value_t = 1)]
    pub delta: usize,
    /// Predictor quality, overriding the default `1/(8·M²·m·log p)`.
    #[arg(long)]
    pub rho: Option<f64>,
}

impl SuOpts {
    fn params(&self) -> Result<SuParams> {
        let p = self.p as usize;
        let s = match self.common.regime {
            Regime::Paper => SuParams::new(p, self.m, self.big_m, self.delta)?,
            Regime::Relaxed => SuParams::relaxed(p, self.m, self.big_m, self.delta)?,
        };
        Ok(match self.rho {
            Some(rho) => s.with_rho(rho),
            None => s,
        })
    }

    fn table(&self, f: &Arc<Field>, label: &str, index: u64) -> Result<Arc<TruthTable>> {
        let points = (self.p as u128).pow(self.m as u32) * 4;
        if points > self.common.cap_bytes as u128 {
            return Err(Error::Resource(format!("the truth table needs {points} bytes, cap is {}", self.common.cap_bytes)));
        }
        let mut r = rng::stream(self.common.seed, label, index);
        let poly = MultiPoly::random(f, self.m, self.delta, &mut r);
        Ok(Arc::new(TruthTable::from_fn(f, self.m, Some(self.delta), |x| poly.eval(f, x))))
    }
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SuGenOpts {
    #[command(flatten)]
    pub su: SuOpts,
    /// Stream the combined generator (SU and CryptoG parts for every
    /// candidate matrix) instead of the SU part for the first generator.
    #[arg(long)]
    pub combined: bool,
    /// Stop after this many strings.
    #[arg(long)]
    pub limit: Option<u64>,
}

fn stream_set(h: &dyn HittingSet, limit: Option<u64>, cap: u64, out: &mut dyn Write) -> Result<(u64, u64)> {
    let n = limit.map_or(h.count(), |l| l.min(h.count()));
    if limit.is_none() && n.saturating_mul(h.bits().div_ceil(4) as u64 + 1) > cap {
        return Err(Error::Resource(format!("{} strings exceed the cap; pass --limit", h.count())));
    }
    let mut digest = 0u64;
    for i in 0..n {
        let w = h.get(i);
        digest = keyed_hash(digest, w);
        writeln!(out, "{}", hex_string(w, h.bits())).map_err(|e| Error::Resource(e.to_string()))?;
    }
    Ok((n, digest))
}

pub fn su_gen(o: &SuGenOpts, out: &mut dyn Write) -> Result<RunReport> {
    let f = Field::of_size(o.su.p)?;
    let params = SuParams::new(f.size(), o.su.m, o.su.big_m, o.su.delta)?;
    let table = o.su.table(&f, "su-gen", 0)?;
    let mut report = RunReport::new("su-gen", o.su.common.regime.name(), o.su.common.seed, json!({ "su": &o.su, "combined": o.combined }));
    let (count, streamed, digest) = if o.combined {
        let h = modified_generate(&table, &params)?;
        let (n, d) = stream_set(&h, o.limit, o.su.common.cap_bytes, out)?;
        (h.count(), n, d)
    } else {
        let set = build_candidate_set(&f, o.su.m)?;
        let g = set.first_generator().ok_or_else(|| Error::Construction("no generator matrix".into()))?;
        let h = hsu_generate(&table, &g.a, &params)?;
        let (n, d) = stream_set(&h, o.limit, o.su.common.cap_bytes, out)?;
        (h.count(), n, d)
    };
    report.aggregate = json!({ "count": count, "streamed": streamed, "digest": format!("{digest:016x}") });
    Ok(report)
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SuReconOpts {
    #[command(flatten)]
    pub su: SuOpts,
    #[arg(long, value_enum, default_value_t = AvoiderKind::Planted)]
    pub avoider: AvoiderKind,
    /// Acceptance density of the random avoider.
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
}

pub fn su_recon(o: &SuReconOpts) -> Result<RunReport> {
    let f = Field::of_size(o.su.p)?;
    let params = o.su.params()?;
    let ctx = SuContext::new(&f, o.su.m)?;
    let mut cfg = ModifiedConfig::for_params(&params);
    cfg.tabulate = true;
    let trials = o.su.common.trials.unwrap_or(20);
    let mut report = RunReport::new(
        "su-recon",
        o.su.common.regime.name(),
        o.su.common.seed,
        json!({ "su": &o.su, "avoider": o.avoider, "density": o.density, "params": &params,
                "paper_regime": params.paper_regime(), "config": &cfg, "candidates": ctx.candidates.len() }),
    );
    let mut outcomes = Vec::new();
    for t in 0..trials {
        let table = o.su.table(&f, "su-recon-poly", t as u64)?;
        let oracle = table_oracle(&table);
        let mut r = rng::stream(o.su.common.seed, "su-recon", t as u64);
        let random = KeyedRandom { key: r.gen(), density: o.density };
        let complement;
        let d: Option<&dyn Distinguisher> = match o.avoider {
            AvoiderKind::Planted => None,
            AvoiderKind::Random => Some(&random),
            AvoiderKind::Constant => Some(&Constant(true)),
            AvoiderKind::Complement => {
                let h = modified_generate(&table, &params)?;
                complement = Complement::new(h.materialize(o.su.common.cap_bytes)?);
                Some(&complement)
            }
        };
        let avoider = d.map_or(Avoider::Planted, Avoider::Genuine);
        let out = modified_reconstruct(&ctx, &oracle, avoider, &params, &cfg, &mut r)?;
        let (outcome, calls) = match &out.circuit {
            None => ("bottom", 0),
            Some(c) => (if c.tabulate() == table.values() { "exact" } else { "wrong" }, c.learn_calls()),
        };
        outcomes.push(outcome);
        report.trials.push(json!({
            "trial": t, "outcome": outcome, "learn_calls": calls,
            "selected": out.circuit.as_ref().map(|c| c.candidate), "candidates": out.candidates,
        }));
    }
    let bottom = rate(&outcomes, "bottom");
    report.aggregate = json!({
        "exact_rate": rate(&outcomes, "exact"), "bottom_rate": bottom, "wrong_rate": rate(&outcomes, "wrong"),
        "bottom_dominated": o.avoider == AvoiderKind::Planted && bottom > 0.5,
    });
    Ok(report)
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CtOpts {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 32)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub h: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long = "M", default_value_t = 4)]
    pub big_m: usize,
    #[arg(long, default_value_t = 2)]
    pub width: usize,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long = "n-in", default_value_t = 2)]
    pub n_in: usize,
    /// Circuit file (header `width depth n_in n_out`, then `layer w u v`
    /// per wire); a random circuit when absent.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Input bits such as `10`; random when absent.
    #[arg(long)]
    pub input: Option<String>,
}

struct CtSetup {
    ladder: PolyLadder,
    params: CtParams,
}

impl CtOpts {
    fn setup(&self) -> Result<CtSetup> {
        let mut r = rng::stream(self.common.seed, "ct-circuit", 0);
        let circuit = match &self.circuit {
            Some(path) => LayeredCircuit::parse(
                &std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?,
            )?,
            None => LayeredCircuit::random(self.width, self.depth, self.n_in, self.width, &mut r)?,
        };
        let input: Vec<bool> = match &self.input {
            Some(s) => s
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Usage(format!("bad input bit {c:?}"))),
                })
                .collect::<Result<_>>()?,
            None => (0..circuit.n_in).map(|_| r.gen()).collect(),
        };
        let params = match self.common.regime {
            Regime::Relaxed => CtParams::toy(self.h, self.p as usize, self.m, self.big_m),
            Regime::Paper => {
                let size = circuit.width * (circuit.depth + 1);
                let log_t = (usize::BITS - size.leading_zeros()).max(1);
                CtParams::paper(circuit.n_in, log_t, circuit.depth, self.big_m, 1.0)?
            }
        };
        let f = Field::of_size(params.p as u64)?;
        let points = (params.p as u128).pow(3 * params.m as u32) * 4;
        if points > self.common.cap_bytes as u128 {
            return Err(Error::Resource(format!("a layer table needs {points} bytes, cap is {}", self.common.cap_bytes)));
        }
        let ladder = PolyLadder::new(&f, params.h, params.m, circuit, &input)?;
        Ok(CtSetup { ladder, params })
    }
}

fn bits_text(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CtGenOpts {
    #[command(flatten)]
    pub ct: CtOpts,
    /// Stop after this many strings.
    #[arg(long)]
    pub limit: Option<u64>,
}

pub fn ct_gen(o: &CtGenOpts, out: &mut dyn Write) -> Result<RunReport> {
    let s = o.ct.setup()?;
    let h = ct_generate(&s.ladder, s.params.big_m, o.ct.common.cap_bytes)?;
    let mut report = RunReport::new(
        "ct-gen",
        o.ct.common.regime.name(),
        o.ct.common.seed,
        json!({ "ct": &o.ct, "params": &s.params, "violations": s.params.violations(),
                "circuit": s.ladder.circuit().to_text(), "input": bits_text(s.ladder.input()) }),
    );
    let (streamed, digest) = stream_set(&h, o.limit, o.ct.common.cap_bytes, out)?;
    report.aggregate = json!({
        "count": h.count(), "polynomials": s.ladder.d_prime(), "per_polynomial": h.per_layer(),
        "streamed": streamed, "digest": format!("{digest:016x}"),
    });
    Ok(report)
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CtReconOpts {
    #[command(flatten)]
    pub ct: CtOpts,
    #[arg(long, value_enum, default_value_t = AvoiderKind::Planted)]
    pub avoider: AvoiderKind,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
}

pub fn ct_recon(o: &CtReconOpts) -> Result<RunReport> {
    if o.avoider == AvoiderKind::Complement {
        return Err(Error::Usage("the complement avoider is not available for ct-recon".into()));
    }
    let s = o.ct.setup()?;
    let f = s.ladder.field().clone();
    let layer = s.params.layer_params()?;
    let ctx = SuContext::new(&f, s.ladder.vars())?;
    let cfg = CtConfig::for_params(&s.ladder, &layer);
    let want = s.ladder.circuit().output(s.ladder.input());
    let trials = o.ct.common.trials.unwrap_or(10);
    let mut report = RunReport::new(
        "ct-recon",
        o.ct.common.regime.name(),
        o.ct.common.seed,
        json!({ "ct": &o.ct, "avoider": o.avoider, "density": o.density, "params": &s.params, "layer": &layer,
                "config": &cfg, "circuit": s.ladder.circuit().to_text(), "input": bits_text(s.ladder.input()),
                "expected": bits_text(&want) }),
    );
    let mut outcomes = Vec::new();
    for t in 0..trials {
        let mut r = rng::stream(o.ct.common.seed, "ct-recon", t as u64);
        let random = KeyedRandom { key: r.gen(), density: o.density };
        let avoider = match o.avoider {
            AvoiderKind::Planted => Avoider::Planted,
            AvoiderKind::Random => Avoider::Genuine(&random),
            _ => Avoider::Genuine(&Constant(true)),
        };
        let out = ct_reconstruct(&s.ladder, &ctx, avoider, &layer, &cfg, &mut r)?;
        let outcome = match &out.output {
            None => "bottom",
            Some(bits) if *bits == want => "correct",
            Some(_) => "wrong",
        };
        outcomes.push(outcome);
        report.trials.push(json!({
            "trial": t, "outcome": outcome, "output": out.output.as_deref().map(bits_text),
            "failed_at": out.failed_at, "reason": out.reason, "learn_calls": out.learn_calls,
        }));
    }
    let bottom = rate(&outcomes, "bottom");
    report.aggregate = json!({
        "correct_rate": rate(&outcomes, "correct"), "bottom_rate": bottom, "wrong_rate": rate(&outcomes, "wrong"),
        "bottom_dominated": o.avoider == AvoiderKind::Planted && bottom > 0.5,
    });
    Ok(report)
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct BootstrapOpts {
    #[command(flatten)]
    pub common: Common,
    /// `leading-bit`, `parity`, `primality` or `cmd:<shell command>`.
    #[arg(long, default_value = "leading-bit")]
    pub property: String,
    /// Density exponent declared for a `cmd:` property.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Input length; the desk registry holds lengths 4 and 16.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Distinguisher handed to the reconstruction at length 4.
    #[arg(long, value_enum, default_value_t = OracleKind::Property)]
    pub oracle: OracleKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum OracleKind {
    Property,
    Planted,
}

fn run_b(report: &mut RunReport, registry: &Registry, n: usize, oracle: CaseOneOracle, seed: u64, trials: usize) -> Result<()> {
    let q = &*registry.property;
    let mut outputs = BTreeSet::new();
    let mut bottoms = 0;
    let mut all_in_q = true;
    for t in 0..trials {
        let mut r = rng::stream(seed, "bootstrap", t as u64);
        let out = algorithm_b(n, registry, oracle, &mut r)?;
        match out.output {
            Some(w) => {
                all_in_q &= q.contains(n, w);
                outputs.insert(bit_string(w, n));
            }
            None => bottoms += 1,
        }
        report.trials.push(json!({
            "trial": t, "case": out.case, "output": out.output.map(|w| bit_string(w, n)),
            "number": out.output.map(|w| number(w, n)), "reason": out.reason,
        }));
    }
    report.aggregate = json!({
        "distinct_outputs": outputs.iter().collect::<Vec<_>>(), "agreement": outputs.len() <= 1,
        "all_in_property": all_in_q, "bottom_rate": bottoms as f64 / trials.max(1) as f64,
        "bottom_dominated": oracle == CaseOneOracle::Planted && 2 * bottoms > trials,
    });
    Ok(())
}

pub fn bootstrap_demo(o: &BootstrapOpts) -> Result<RunReport> {
    let q = property::select(&o.property, o.rho)?;
    let registry = desk_registry(q.clone())?;
    let schedule = schedule_compute(16, 2, 4, 1.0, q.rho())?;
    let oracle = match o.oracle {
        OracleKind::Property => CaseOneOracle::Property,
        OracleKind::Planted => CaseOneOracle::Planted,
    };
    let trials = o.common.trials.unwrap_or(10);
    let mut report = RunReport::new(
        "bootstrap-demo",
        o.common.regime.name(),
        o.common.seed,
        json!({ "opts": o, "property": q.name(), "ladder": registry.ladder,
                "levels": registry.levels.iter().map(|l| l.n).collect::<Vec<_>>(), "schedule": schedule }),
    );
    run_b(&mut report, &registry, o.n, oracle, o.common.seed, trials)?;
    Ok(report)
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct PrimeOpts {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 16)]
    pub bits: usize,
}

pub fn prime_demo(o: &PrimeOpts) -> Result<RunReport> {
    if o.bits < 2 {
        return Err(Error::Usage("--bits must be at least 2".into()));
    }
    let mut registry = Registry::new(LengthLadder { base: o.bits as u64, beta: 2 }, Arc::new(Primality));
    registry.push_case_two(o.bits)?;
    let mut report = RunReport::new("prime-demo", o.common.regime.name(), o.common.seed, json!({ "bits": o.bits }));
    run_b(&mut report, &registry, o.bits, CaseOneOracle::Property, o.common.seed, o.common.trials.unwrap_or(1))?;
    Ok(report)
}
