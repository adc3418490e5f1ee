//! Runs scenario checks against the engine.

use std::sync::Arc;

use presym_core::cartan::{d, Form};
use presym_core::coeffring::{Chart, Coefficient, Value};
use presym_core::foliation::{
    cycle_integral_fol, cycle_integral_presym, kuranishi, CycleValue, kuranishi_fol, oracle_disagreements, q_morphism,
    q_strictness_check, sample_phis, sample_vvf,
};
use presym_core::koszul::{bv_square_check, f_section, koszul2, koszul3, linf_relation_check, mc_residual, relation_samples};
use presym_core::presym::horizontal_form;
use presym_core::sampling::{monomial_forms, Sampler};
use presym_core::{Error, Q};

use crate::report::{CheckReport, Status};
use crate::scenario::{build_form, build_vvf, parse_q, Check, CliError, Loaded};

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub float_tol: f64,
}

/// Which commands run which check kinds.
pub fn selected(command: &str, check: &Check) -> bool {
    match command {
        "mc-check" => matches!(check, Check::Mc { .. }),
        "exp-map" => matches!(check, Check::ExpMap { .. }),
        "linf-verify" => matches!(check, Check::Linf { .. } | Check::Bv { .. }),
        "foliation-check" => matches!(check, Check::Foliation { .. }),
        "obstruction" => matches!(check, Check::ObstructionPresym { .. } | Check::ObstructionFol { .. }),
        "selftest" => true,
        _ => false,
    }
}

fn half_angle(s: &mut Sampler) -> Q {
    Q::new(s.small_int(0, 3).into(), 2.into())
}

fn expected_form(ch: &Arc<Chart>, terms: &[crate::scenario::Term], what: &str) -> Result<Form, CliError> {
    build_form(ch, terms, what)
}

struct Ctx<'a> {
    loaded: &'a Loaded,
    opts: &'a Options,
    seed: u64,
}

impl Ctx<'_> {
    fn sampler(&self, id: &str) -> Sampler {
        // one stream per check, independent of check order
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in id.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        Sampler::new(self.seed ^ h)
    }

    fn samples(&self, n: usize) -> usize {
        self.opts.samples.unwrap_or(n)
    }
}

pub fn run_check(loaded: &Loaded, check: &Check, opts: &Options, seed: u64) -> CheckReport {
    let ctx = Ctx { loaded, opts, seed };
    let mut r = CheckReport::new(check.id(), check.kind());
    if let Err(e) = run(&ctx, check, &mut r) {
        r.status = Status::Error;
        r.ring_error = matches!(e, CliError::Ring(_));
        r.detail(e.to_string());
    }
    r
}

fn run(ctx: &Ctx, check: &Check, r: &mut CheckReport) -> Result<(), CliError> {
    let l = ctx.loaded;
    let model = &l.model;
    let k = model.koszul();
    let ch = model.chart();
    let err = |e: Error| CliError::from(e);
    match check {
        Check::Mc {
            deformation,
            expect_mc,
            section,
            d: expect_d,
            binary,
            trinary,
            ..
        } => {
            let beta = &l.deformations[deformation];
            let res = mc_residual(k, beta).map_err(|e| err(e.into()))?;
            r.detail(format!("residual = {}", res.render()));
            r.expect(res.is_zero() == *expect_mc, || {
                format!("expected MC = {expect_mc}, residual {}", res.render())
            });
            let compare = |r: &mut CheckReport, what: &str, got: Form, want: &Option<Vec<crate::scenario::Term>>| {
                if let Some(terms) = want {
                    match expected_form(ch, terms, what) {
                        Ok(w) => {
                            r.detail(format!("{what} = {}", got.render()));
                            r.expect(got == w, || format!("{what}: expected {}, got {}", w.render(), got.render()));
                        }
                        Err(e) => r.fail(e.to_string()),
                    }
                }
            };
            if section.is_some() {
                let f = f_section(k, beta).map_err(|e| err(e.into()))?;
                compare(r, "F(β)", f, section);
            }
            compare(r, "dβ", d(beta), expect_d);
            if binary.is_some() {
                compare(r, "[β,β]", koszul2(k, beta, beta).map_err(|e| err(e.into()))?, binary);
            }
            if trinary.is_some() {
                compare(r, "[β,β,β]", koszul3(k, beta, beta, beta).map_err(|e| err(e.into()))?, trinary);
            }
        }
        Check::ExpMap {
            deformation,
            expect_mc,
            ..
        } => {
            let beta = &l.deformations[deformation];
            let points = model.admissible_points(beta, &l.points);
            if points.is_empty() {
                return Err(CliError::Ring("no sample point is admissible".into()));
            }
            let rep = model.verify_main_theorem(beta, &points).map_err(|e| err(e.into()))?;
            r.detail(format!(
                "mc = {}, closed = {}, ranks = {:?} at {} points",
                rep.mc,
                rep.closed,
                rep.ranks,
                points.len()
            ));
            r.expect(rep.agree(), || format!("disagreement: residual {}, d exp = {}", rep.residual, rep.d_image));
            if let Some(want) = expect_mc {
                r.expect(rep.mc == *want, || format!("expected MC = {want}"));
            }
        }
        Check::Linf {
            id,
            max_arity,
            samples,
        } => {
            let mut s = ctx.sampler(id);
            let rounds = ctx.samples(*samples);
            let tuples = relation_samples(&mut s, ch, *max_arity, rounds);
            let out = linf_relation_check(k, &tuples);
            let bad: Vec<_> = out.iter().filter(|o| !o.vanishes).collect();
            r.detail(format!("Koszul side: {} relations up to arity {max_arity}", out.len()));
            for o in &bad {
                r.fail(format!("Koszul arity {} sample {}", o.arity, o.sample));
            }
            if let Some(alg) = &l.foliation {
                let mut tuples = Vec::new();
                for n in 1..=*max_arity {
                    for _ in 0..rounds {
                        tuples.push(
                            (0..n)
                                .map(|_| {
                                    let deg = if n >= 4 { 0 } else { s.small_int(0, 1) as usize };
                                    sample_vvf(&mut s, alg, deg, 2)
                                })
                                .collect::<Vec<_>>(),
                        );
                    }
                }
                let out = linf_relation_check(alg, &tuples);
                r.detail(format!("foliation side: {} relations up to arity {max_arity}", out.len()));
                for o in out.iter().filter(|o| !o.vanishes) {
                    r.fail(format!("foliation arity {} sample {}", o.arity, o.sample));
                }
            }
        }
        Check::Bv { .. } => {
            let basis = monomial_forms(ch);
            let rep = bv_square_check(k, &basis);
            r.detail(format!("{} coefficient checks on {} monomials", rep.checked, basis.len()));
            for (i, p) in &rep.failures {
                r.fail(format!("t^{p} coefficient on {}", basis[*i].render()));
            }
        }
        Check::Foliation {
            id,
            phi,
            expect_mc,
            q_of,
            l2,
            samples,
        } => {
            let alg = l
                .foliation
                .as_ref()
                .ok_or_else(|| CliError::Schema("model has no foliation side".into()))?;
            if let Some(name) = phi {
                let f = &l.foliation_deformations[name];
                let res = alg.mc_residual_fol(f).map_err(|e| err(e.into()))?;
                let oracle = alg.involutivity_oracle(f).map_err(|e| err(e.into()))?;
                r.detail(format!("l1 = {}", alg.l1(f).map_err(|e| err(e.into()))?.render()));
                r.detail(format!("residual = {}", res.render()));
                r.detail(format!("involutive = {}", oracle.involutive));
                if let Some((i, j)) = oracle.witness {
                    r.detail(format!("graph bracket leaves the graph on (X{}, X{})", i + 1, j + 1));
                }
                r.expect(res.is_zero() == oracle.involutive, || "residual and oracle disagree".into());
                if let Some(want) = expect_mc {
                    r.expect(res.is_zero() == *want, || format!("expected MC = {want}"));
                }
                if let Some(terms) = l2 {
                    let want = build_vvf(alg, terms, "l2")?;
                    let got = alg.l2(f, f).map_err(|e| err(e.into()))?;
                    r.detail(format!("l2 = {}", got.render()));
                    r.expect(got == want, || format!("l2: expected {}, got {}", want.render(), got.render()));
                }
                if let Some(b) = q_of {
                    let got = q_morphism(alg, &l.deformations[b]).map_err(|e| err(e.into()))?;
                    r.detail(format!("q({b}) = {name}: {}", &got == f));
                    r.expect(&got == f, || format!("q({b}) = {}", got.render()));
                }
            }
            let n = ctx.samples(*samples);
            if n > 0 {
                let mut s = ctx.sampler(id);
                let fails = q_strictness_check(alg, &mut s, n).map_err(|e| err(e.into()))?;
                r.detail(format!("q-strictness on {n} horizontal triples"));
                for f in fails {
                    r.fail(format!("q-strictness arity {} sample {}", f.arity, f.sample));
                }
                let phis = sample_phis(&mut s, alg, n);
                let bad = oracle_disagreements(alg, &phis).map_err(|e| err(e.into()))?;
                r.detail(format!("residual/oracle agreement on {n} sampled φ"));
                for i in bad {
                    r.fail(format!("oracle disagreement on {}", phis[i].render()));
                }
            }
        }
        Check::ObstructionPresym {
            id,
            deformation,
            a,
            b,
            expect,
            samples,
        } => {
            let (a, b) = (parse_q(a)?, parse_q(b)?);
            let w = &l.deformations[deformation];
            let kr = kuranishi(k, w).map_err(|e| err(e.into()))?;
            r.detail(format!("λ2(w,w) = {}", kr.render()));
            let v = cycle_integral_presym(&kr, &a, &b, true).map_err(|e| err(e.into()))?;
            let cv = CycleValue::new(format!("C[a={a},b={b}]"), v.clone(), ctx.opts.float_tol);
            let cert = cv.nonzero;
            r.certificates.push(cv.into());
            r.detail(format!("integral over C[a={a},b={b}] = {v}"));
            r.expect(cert, || "pairing vanishes: no certificate".into());
            if let Some(e) = expect {
                let want = ch.parse(e).map_err(|e| CliError::Schema(e.to_string()))?;
                r.expect(value_matches(&v, &want, ch, ctx.opts.float_tol), || format!("expected {e}, got {v}"));
            }
            let n = ctx.samples(*samples);
            if n > 0 {
                let mut s = ctx.sampler(id);
                for _ in 0..n {
                    let alpha = horizontal_form(&mut s, model, 2, 3);
                    let (a, b) = (half_angle(&mut s), half_angle(&mut s));
                    let v = cycle_integral_presym(&d(&alpha), &a, &b, false).map_err(|e| err(e.into()))?;
                    if nonzero(&v) {
                        r.fail(format!("coboundary pairs to {v}: α = {}", alpha.render()));
                    }
                }
                r.detail(format!("{n} coboundaries dα pair to 0"));
            }
        }
        Check::ObstructionFol {
            id,
            phi,
            a,
            c,
            expect_abs,
            samples,
        } => {
            let alg = l
                .foliation
                .as_ref()
                .ok_or_else(|| CliError::Schema("model has no foliation side".into()))?;
            let (a, c) = (parse_q(a)?, parse_q(c)?);
            let kr = kuranishi_fol(alg, &l.foliation_deformations[phi]).map_err(|e| err(e.into()))?;
            r.detail(format!("-l2(φ,φ) = {}", kr.render()));
            let vals = cycle_integral_fol(alg, &kr, &a, &c, true).map_err(|e| err(e.into()))?;
            let shown: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
            let mut cert = false;
            for (b, v) in vals.iter().enumerate() {
                let cv = CycleValue::new(format!("N[a={a},c={c}] g{}", b + 1), v.clone(), ctx.opts.float_tol);
                cert |= cv.nonzero;
                r.certificates.push(cv.into());
            }
            r.detail(format!("integral over N[a={a},c={c}] = ({})", shown.join(", ")));
            r.expect(cert, || "pairing vanishes: no certificate".into());
            if let Some(want) = expect_abs {
                for v in &vals {
                    let got = v.to_f64().abs();
                    r.expect((got - want).abs() <= ctx.opts.float_tol, || format!("|component| = {got}, expected {want}"));
                }
            }
            let n = ctx.samples(*samples);
            if n > 0 {
                let mut s = ctx.sampler(id);
                for _ in 0..n {
                    let xi = sample_vvf(&mut s, alg, 1, 4);
                    let (a, c) = (half_angle(&mut s), half_angle(&mut s));
                    let l1 = alg.l1(&xi).map_err(|e| err(e.into()))?;
                    let vals = cycle_integral_fol(alg, &l1, &a, &c, false).map_err(|e| err(e.into()))?;
                    if vals.iter().any(nonzero) {
                        r.fail(format!("l1(ξ) pairs to nonzero: ξ = {}", xi.render()));
                    }
                }
                r.detail(format!("{n} coboundaries l1(ξ) pair to (0, 0)"));
            }
        }
    }
    Ok(())
}

fn nonzero(v: &Value) -> bool {
    CycleValue::new("", v.clone(), 0.0).nonzero
}

fn value_matches(v: &Value, want: &Coefficient, ch: &Chart, tol: f64) -> bool {
    let Ok(w) = want.eval(ch, &vec![Q::from_integer(0.into()); ch.dim()]) else {
        return false;
    };
    match (v, &w) {
        (Value::Exact(a), Value::Exact(b)) => a == b,
        _ => (v.to_f64() - w.to_f64()).abs() <= tol,
    }
}
