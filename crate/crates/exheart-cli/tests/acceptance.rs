//! Acceptance criteria: one PASS/FAIL line each, then a nonzero exit if any failed.

#[path = "../../exheart/tests/common/mod.rs"]
mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exheart::acyclic::Classifier;
use exheart::exact::{check_maximally_nonnegative, ExactSubcat, Structure};
use exheart::fixtures::{a2, dual_numbers};
use exheart::functor::Transport;
use exheart::heart::{characterize, completion_crosscheck, compute_heart, hearts_of_hearts, maximal_t_pairs, Heart, Universe, UniverseConfig};
use exheart::module::{hom_basis, Module};
use exheart::FieldSpec;
use exheart_cli::golden::{run_text, EXAMPLES};
use exheart_cli::run::{Options, Status};

const FAST_LIMIT: Duration = Duration::from_secs(5);
const CLOSURE_LIMIT: Duration = Duration::from_secs(60);
const CLOSURE_PER_ALGEBRA: usize = 200;
const ABELIAN_SEQUENCES: usize = 500;
const CONSTRUCTIVE_EACH: usize = 50;
const CONSTRUCTIVE_ATTEMPTS: usize = 2000;
const SPLIT_FUNCTORS: usize = 30;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let (Ok(_), Some(l)) = (&out, limit) {
        if took > l {
            out = Err(format!("took {took:.2?}, limit {l:?}"));
        }
    }
    (out, took)
}

fn names(u: &Universe, idx: &[usize]) -> Vec<String> {
    let mut v = u.names(idx);
    v.sort();
    v
}

fn a2_injectives() -> ExactSubcat {
    let alg = a2(q());
    ExactSubcat::new(&alg, vec![Module::injective(&alg, 0), Module::injective(&alg, 1)], Structure::Induced).unwrap()
}

fn c1() -> Outcome {
    let text = EXAMPLES.iter().find(|(n, _)| *n == "a2_example").unwrap().1;
    let reports = run_text(text, Options::default()).map_err(show)?;
    let headline = |q: &str| reports.iter().find(|r| r.query.starts_with(q)).map(|r| (r.status, r.headline.clone()));
    ensure(headline("heart compute E_sub LHb") == Some((Status::Pass, "P2, I2, shift(P1,1)".into())), || format!("LHb {:?}", headline("heart compute E_sub LHb")))?;
    ensure(headline("heart compute E_sub RHb") == Some((Status::Pass, "P1, P2, I2".into())), || format!("RHb {:?}", headline("heart compute E_sub RHb")))?;
    let e = a2_injectives();
    let u = Universe::new(&e, UniverseConfig::default()).map_err(show)?;
    let cls = Classifier::new(&e).map_err(show)?;
    let hh = hearts_of_hearts(&u, &cls).map_err(show)?;
    let (lh, rh) = (names(&u, &hh.lh), names(&u, &hh.rh));
    ensure(names(&u, &hh.lh_of_rh) == rh, || "LH(RH) differs from RH".into())?;
    ensure(names(&u, &hh.rh_of_lh) == lh, || "RH(LH) differs from LH".into())?;
    ensure(lh != rh, || "LH equals RH".into())?;
    Ok(format!("LH^b = {{{}}}, RH^b = {{{}}}", lh.join(", "), rh.join(", ")))
}

fn c2() -> Outcome {
    let alg = dual_numbers(q());
    let lam = Module::projective(&alg, 0);
    let e = ExactSubcat::new(&alg, vec![lam.clone()], Structure::Split).map_err(show)?;
    let v = check_maximally_nonnegative(&e, 2).map_err(show)?;
    ensure(v.verified(), || format!("{v:?}"))?;
    let t = hom_basis(&alg, &lam, &lam).into_iter().find(|h| h.is_nilpotent_endo() && !h.is_zero()).ok_or("no nilpotent endomorphism")?;
    ensure(!e.is_mono_in_e(&t) && !e.is_epi_in_e(&t), || "·T classified mono or epi".into())?;
    let u = Universe::new(&e, UniverseConfig::default()).map_err(show)?;
    let cls = Classifier::new(&e).map_err(show)?;
    for h in [Heart::LHb, Heart::RHb] {
        let d = compute_heart(&u, &cls, h).map_err(show)?;
        ensure(d.undetermined.is_empty(), || format!("{} undetermined: {:?}", h.label(), d.undetermined))?;
        ensure(!d.members.is_empty() && d.members.iter().all(|&i| u.candidates[i].is_stalk() && u.candidates[i].shift == 0), || {
            format!("{} = {:?}", h.label(), d.names)
        })?;
    }
    Ok(format!("{}, ·T neither mono nor epi, hearts = stalks of E", exheart_cli::run::maxneg_text(&v)))
}

fn c3() -> Outcome {
    let a = a2(q());
    let d = dual_numbers(q());
    let (p1, p2, i2) = (Module::projective(&a, 0), Module::projective(&a, 1), Module::injective(&a, 1));
    let cases = vec![
        ("add(I1+I2)", a2_injectives()),
        ("add(L)", ExactSubcat::new(&d, vec![Module::projective(&d, 0)], Structure::Split).map_err(show)?),
        ("add(P1+P2)", ExactSubcat::new(&a, vec![p1, p2.clone()], Structure::Induced).map_err(show)?),
        ("mod kA2", ExactSubcat::module_category(&a, 6).map_err(show)?),
        ("add(P2+I2)", ExactSubcat::new(&a, vec![p2, i2], Structure::Induced).map_err(show)?),
    ];
    let mut summary = Vec::new();
    for (name, e) in &cases {
        let u = Universe::new(e, UniverseConfig::default()).map_err(show)?;
        let cls = Classifier::new(e).map_err(show)?;
        let c = characterize(&u, &cls, 2).map_err(show)?;
        ensure(c.consistent(), || format!("{name}: {c:?}"))?;
        summary.push(format!("{name}:{}", c.hearts_are_e));
    }
    Ok(format!("{} instances agree ({})", cases.len(), summary.join(" ")))
}

fn c4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut lines = Vec::new();
    for (algebra, fixtures) in [("kA2", a2_fixtures(F5)), ("k[T]/T2", dual_number_fixtures(F5))] {
        let per = CLOSURE_PER_ALGEBRA.div_ceil(fixtures.len());
        let mut t: [Tally; 3] = Default::default();
        for fx in &fixtures {
            for _ in 0..per {
                closure_instance(&mut rng, fx, &mut t).map_err(show)?;
            }
        }
        for (name, x) in ["cone", "retract", "2-of-3"].iter().zip(&t) {
            ensure(x.violations.is_empty(), || format!("{algebra} {name}: {:?}", x.violations.first()))?;
        }
        lines.push(format!("{algebra}: {} instances, {} determinate", per * fixtures.len(), t.iter().map(|x| x.holds + x.vacuous).sum::<usize>()));
    }
    Ok(format!("0 violations; {}", lines.join("; ")))
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let fixtures = [a2_fixtures(F5).remove(0), dual_number_fixtures(F5).remove(2)];
    let mut t = Tally::default();
    for k in 0..ABELIAN_SEQUENCES {
        let fx = &fixtures[k % 2];
        let (f, g) = exheart::sample::sequence(&mut rng, fx.e(), 2).map_err(show)?;
        t.add(abelian_oracle(&fx.cls, &f, &g).map_err(show)?);
    }
    ensure(t.violations.is_empty() && t.indeterminate == 0, || format!("{} violations, {} indeterminate", t.violations.len(), t.indeterminate))?;
    Ok(format!("{}/{} sequences agree", t.holds, ABELIAN_SEQUENCES))
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut fixtures = a2_fixtures(F5);
    fixtures.extend(dual_number_fixtures(F5));
    let transports: Vec<Transport> = fixtures.iter().map(|fx| Transport::new(fx.e())).collect::<Result<_, _>>().map_err(show)?;
    let mut counts = [0usize; 3];
    for k in 0..CONSTRUCTIVE_ATTEMPTS {
        if counts.iter().all(|&c| c >= CONSTRUCTIVE_EACH) {
            break;
        }
        let i = k % fixtures.len();
        let (fx, tr) = (&fixtures[i], &transports[i]);
        let results = [
            lift_instance(&mut rng, fx).map_err(show)?,
            homotopy_instance(&mut rng, fx).map_err(show)?,
            horseshoe_instance(&mut rng, fx, tr).map_err(show)?,
        ];
        for (j, r) in results.iter().enumerate() {
            match r {
                Some(true) => counts[j] += 1,
                Some(false) => return Err(format!("{} instance failed to verify on {}", ["lift", "homotopy", "horseshoe"][j], fx.name)),
                None => {}
            }
        }
    }
    ensure(counts.iter().all(|&c| c >= CONSTRUCTIVE_EACH), || format!("too few instances: {counts:?}"))?;
    Ok(format!("lift {}, homotopy {}, horseshoe {} verified", counts[0], counts[1], counts[2]))
}

fn c7() -> Outcome {
    let a = a2(q());
    let proj = ExactSubcat::new(&a, vec![Module::projective(&a, 0), Module::projective(&a, 1)], Structure::Induced).map_err(show)?;
    let mut out = Vec::new();
    for (name, e) in [("add(I1+I2)", a2_injectives()), ("add(P1+P2)", proj)] {
        let u = Universe::new(&e, UniverseConfig::default()).map_err(show)?;
        let r = completion_crosscheck(&u, &Classifier::new(&e).map_err(show)?).map_err(show)?;
        ensure(r.lh_names.len() == r.r_names.len() && r.bijective && r.tables_equal(), || format!("{name}: {r:?}"))?;
        out.push(format!("{name}: {} generators", r.lh_names.len()));
    }
    Ok(out.join(", "))
}

fn c8() -> Outcome {
    let e = a2_injectives();
    let u = Universe::new(&e, UniverseConfig::default()).map_err(show)?;
    let cls = Classifier::new(&e).map_err(show)?;
    ensure(u.complete, || "window enumeration incomplete".into())?;
    let t = maximal_t_pairs(&u, &cls).map_err(show)?;
    for (name, r) in [("(U, V_l)", &t.standard), ("first", &t.first), ("second", &t.second)] {
        ensure(r.orthogonal() && r.right_maximal, || format!("{name}: {r:?}"))?;
    }
    let hh = hearts_of_hearts(&u, &cls).map_err(show)?;
    ensure(names(&u, &t.first_heart) == names(&u, &hh.rh_of_lh), || "first heart differs from RH(LH)".into())?;
    ensure(names(&u, &t.second_heart) == names(&u, &hh.lh_of_rh), || "second heart differs from LH(RH)".into())?;
    Ok(format!("{} candidates, orthogonal, hearts match", u.candidates.len()))
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let fixtures = split_fixtures(F5);
    let mut out = Vec::new();
    // One split structure over each algebra.
    for fx in [&fixtures[0], &fixtures[2]] {
        let tr = Transport::new(fx.e()).map_err(show)?;
        let mut t = Tally::default();
        for _ in 0..SPLIT_FUNCTORS {
            for c in split_completion_instance(&mut rng, fx, &tr).map_err(show)? {
                t.add(c);
            }
        }
        ensure(t.violations.is_empty() && t.indeterminate == 0, || format!("{}: {:?}, {} indeterminate", fx.name, t.violations.first(), t.indeterminate))?;
        out.push(format!("{}: {} functors agree", fx.name, t.holds / 2));
    }
    Ok(out.join(", "))
}

fn main() {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 9] = [
        ("C1 A2 hearts", Some(FAST_LIMIT), c1),
        ("C2 dual numbers maximally non-negative", Some(FAST_LIMIT), c2),
        ("C3 characterization consistency", None, c3),
        ("C4 cone/retract/two-out-of-three", Some(CLOSURE_LIMIT), c4),
        ("C5 abelian oracle", None, c5),
        ("C6 constructive lemmas", None, c6),
        ("C7 completion crosscheck", None, c7),
        ("C8 t-pairs", None, c8),
        ("C9 split completion", None, c9),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let (out, took) = timed(limit, run);
        match out {
            Ok(detail) => println!("PASS {name} [{took:.2?}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} [{took:.2?}]: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
