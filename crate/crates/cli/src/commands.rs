use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use qser_core::congruence::{
    check_jobs_with, default_instances, default_n_max, rbar_series, scan, theorem_claims, ClaimKind,
    Job, TheoremParams, THEOREM_IDS,
};
use qser_core::enumeration::{count_rbar_dp, count_rbar_enum, DP_BOUND, ENUMERATION_BOUND};
use qser_core::identities::{self, catalog, trunc_for, DissectExpr, IdentityEntry, Source, MIN_TRUNC};
use qser_core::qexpr::{evaluate, parse, QExpr};
use qser_core::report::{CheckReport, Counterexample, Status};
use qser_core::Ring;

use crate::cache::{rbar_key, CoefficientCache};
use crate::output::{render_coefficients, Format, Sink};
use crate::{CacheAction, Cli, Command, DumpArgs, GlobalOpts, IdentitiesArgs, OracleArgs, ScanArgs, VerifyArgs, CEILING_LIMIT};

/// How a command ended; maps onto the process exit status.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Some check failed or could not be evaluated.
    Fail,
    Usage(String),
    /// A requested expansion is above the truncation ceiling.
    Refused(String),
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> ExitCode {
        match o {
            Outcome::Pass => ExitCode::SUCCESS,
            Outcome::Fail => ExitCode::from(1),
            Outcome::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Outcome::Refused(msg) => {
                eprintln!("refused: {msg}");
                ExitCode::from(3)
            }
        }
    }
}

fn summarize(reports: &[CheckReport], refused: bool) -> Outcome {
    if reports.iter().any(|r| r.status == Status::Fail) {
        return Outcome::Fail;
    }
    if refused {
        return Outcome::Refused("some claims exceed the truncation ceiling (see --ceiling, --allow-large)".into());
    }
    if reports.iter().any(|r| r.status == Status::Error) {
        return Outcome::Fail;
    }
    Outcome::Pass
}

pub fn dispatch(cli: Cli) -> Outcome {
    let g = &cli.global;
    if g.ceiling > CEILING_LIMIT && !g.allow_large {
        return Outcome::Usage(format!("a ceiling above {CEILING_LIMIT} needs --allow-large"));
    }
    if let Some(n) = g.jobs {
        if n == 0 {
            return Outcome::Usage("--jobs must be at least 1".into());
        }
        set_jobs(n);
    }
    let cache = match &g.cache_dir {
        Some(dir) => match CoefficientCache::open(dir) {
            Ok(c) => Some(c),
            Err(e) => return Outcome::Usage(format!("cache directory: {e}")),
        },
        None => None,
    };
    match &cli.command {
        Command::Verify(a) => verify(g, cache.as_ref(), a),
        Command::Identities(a) => identities_cmd(g, a),
        Command::OracleCompare(a) => oracle_compare(g, a),
        Command::Scan(a) => scan_cmd(g, a),
        Command::Dump(a) => dump(g, a),
        Command::Cache { action } => cache_cmd(g, cache.as_ref(), action),
    }
}

#[cfg(feature = "parallel")]
fn set_jobs(n: usize) {
    // only fails if a pool already exists, in which case it is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

#[cfg(not(feature = "parallel"))]
fn set_jobs(n: usize) {
    if n > 1 {
        eprintln!("warning: built without the `parallel` feature; --jobs {n} is ignored");
    }
}

fn verify(g: &GlobalOpts, cache: Option<&CoefficientCache>, a: &VerifyArgs) -> Outcome {
    let params = TheoremParams {
        k: a.k,
        ell: a.ell,
        p: a.p,
        primes: a.primes.clone(),
        j: a.j,
        s: a.s,
        k_max: a.k_max,
    };
    let has_params = params != TheoremParams::default();
    let ids: Vec<&str> = if a.id == "all" {
        if has_params {
            return Outcome::Usage("theorem parameters need a single theorem id, not `all`".into());
        }
        THEOREM_IDS.to_vec()
    } else if THEOREM_IDS.contains(&a.id.as_str()) {
        vec![a.id.as_str()]
    } else {
        return Outcome::Usage(format!("unknown theorem id `{}` (known: {}, all)", a.id, THEOREM_IDS.join(", ")));
    };
    let mut claims = Vec::new();
    for id in ids {
        let generated = if has_params { theorem_claims(id, &params) } else { default_instances(id) };
        match generated {
            Ok(c) => claims.extend(c),
            Err(e) => return Outcome::Usage(e.to_string()),
        }
    }
    if let Some(m) = a.modulus {
        if let Err(e) = Ring::modular(m) {
            return Outcome::Usage(e.to_string());
        }
        for c in &mut claims {
            c.modulus = m;
            c.kind = ClaimKind::Conjecture;
            c.source.push_str(" (modulus overridden)");
        }
    }
    let jobs: Vec<Job> = claims
        .into_iter()
        .map(|c| {
            let n_max = a.nmax.unwrap_or_else(|| default_n_max(c.a));
            Job::new(c, n_max)
        })
        .collect();
    let refused = jobs.iter().any(|j| j.claim.trunc_for(j.n_max) > g.ceiling);
    let sink = Sink::stdout(g.format);
    let provide = |ell: u64, ring: Ring, t: usize| match cache {
        Some(c) => c.get_or_compute(&rbar_key(ell), ring, t, || rbar_series(ell, t, ring)),
        None => rbar_series(ell, t, ring),
    };
    let reports = check_jobs_with(&jobs, g.ceiling, provide, |r| sink.report(r));
    summarize(&reports, refused)
}

fn negative_control() -> IdentityEntry {
    let mut e = catalog().into_iter().find(|e| e.id == "diss-1f1^2").expect("catalog entry");
    let Source::Expr(rhs) = e.rhs.base.clone() else { unreachable!("expression entry") };
    e.id = "negative-control".into();
    e.aliases.clear();
    e.rhs = DissectExpr::expr(QExpr::Sum(vec![rhs, QExpr::QPow(1)]));
    e
}

fn identities_cmd(g: &GlobalOpts, a: &IdentitiesArgs) -> Outcome {
    if a.trunc < MIN_TRUNC {
        return Outcome::Usage(format!("--trunc must be at least {MIN_TRUNC}"));
    }
    let all = catalog();
    let mut entries = if a.ids.is_empty() {
        all
    } else {
        let mut picked = Vec::new();
        for id in &a.ids {
            match all.iter().find(|e| e.matches(id)) {
                Some(e) => picked.push(e.clone()),
                None => return Outcome::Usage(format!("unknown identity `{id}`")),
            }
        }
        picked
    };
    if a.negative_control {
        entries.push(negative_control());
    }
    let deepest = entries
        .iter()
        .flat_map(|e| {
            let t = trunc_for(e, a.trunc);
            [e.lhs.base_trunc(t), e.rhs.base_trunc(t)]
        })
        .max()
        .unwrap_or(0);
    if deepest as u64 > g.ceiling {
        return Outcome::Refused(format!("the catalog needs {deepest} coefficients at --trunc {}", a.trunc));
    }
    let sink = Sink::stdout(g.format);
    let reports = identities::verify_entries_streaming(&entries, a.trunc, |r| sink.report(r));
    summarize(&reports, false)
}

fn oracle_compare(g: &GlobalOpts, a: &OracleArgs) -> Outcome {
    if a.ell == 0 {
        return Outcome::Usage("--ell must be at least 1".into());
    }
    if a.n_enum > ENUMERATION_BOUND {
        return Outcome::Usage(format!("--n-enum is limited to {ENUMERATION_BOUND}"));
    }
    if a.n_dp > DP_BOUND {
        return Outcome::Usage(format!("--n-dp is limited to {DP_BOUND}"));
    }
    let start = Instant::now();
    let dp: Vec<BigInt> = count_rbar_dp(a.ell, a.n_dp).expect("bounds checked").into_iter().map(BigInt::from).collect();
    let series = evaluate(&QExpr::rbar_gf(a.ell as usize), a.n_dp, Ring::INTEGERS)
        .expect("generating function has unit constant term")
        .to_bigints();
    let sink = Sink::stdout(g.format);
    let mut reports = Vec::new();
    let mut compare = |id: String, upto: usize, got: &dyn Fn(usize) -> BigInt, want: &[BigInt]| {
        let bad = (0..=upto).find(|&n| got(n) != want[n]);
        let mut r = match bad {
            None => CheckReport::pass(id, upto as u64, start.elapsed()),
            Some(n) => CheckReport::fail(
                id,
                upto as u64,
                Counterexample { n: n as i64, value: got(n).to_string(), expected: Some(want[n].to_string()) },
                start.elapsed(),
            ),
        };
        if a.ell == 1 {
            r = r.with_note("l = 1 excludes every non-overlined part: the counts are partitions into distinct parts");
        }
        sink.report(&r);
        reports.push(r);
    };
    let n_enum = a.n_enum.min(a.n_dp as u64) as usize;
    compare(
        format!("oracle l={}: enumeration vs dp", a.ell),
        n_enum,
        &|n| BigInt::from(count_rbar_enum(a.ell, n as u64).expect("bounds checked")),
        &dp,
    );
    compare(format!("oracle l={}: series vs dp", a.ell), a.n_dp, &|n| series[n].clone(), &dp);
    summarize(&reports, false)
}

fn scan_cmd(g: &GlobalOpts, a: &ScanArgs) -> Outcome {
    if a.ell == 0 || a.amax == 0 {
        return Outcome::Usage("--ell and --amax must be at least 1".into());
    }
    for &m in &a.moduli {
        if let Err(e) = Ring::modular(m) {
            return Outcome::Usage(e.to_string());
        }
    }
    let needed = a.amax.saturating_mul(a.nmax + 1);
    if needed > g.ceiling {
        return Outcome::Refused(format!("the scan needs {needed} coefficients"));
    }
    let start = Instant::now();
    let found = match scan(a.ell, a.amax, &a.moduli, a.nmax) {
        Ok(f) => f,
        Err(e) => return Outcome::Usage(e.to_string()),
    };
    let sink = Sink::stdout(g.format);
    for c in found {
        let mut r = CheckReport::pass(c.label(), a.nmax, start.elapsed()).with_note(c.kind.disclaimer());
        r.claim = Some(c);
        sink.report(&r);
    }
    Outcome::Pass
}

fn dump(g: &GlobalOpts, a: &DumpArgs) -> Outcome {
    let expr = match parse(&a.expr) {
        Ok(e) => e,
        Err(e) => return Outcome::Usage(e.to_string()),
    };
    if a.trunc as u64 > g.ceiling {
        return Outcome::Refused(format!("--trunc {} is above the ceiling {}", a.trunc, g.ceiling));
    }
    let ring = match Ring::from_option(a.modulus) {
        Ok(r) => r,
        Err(e) => return Outcome::Usage(e.to_string()),
    };
    match evaluate(&expr, a.trunc, ring) {
        Ok(s) => {
            print!("{}", render_coefficients(&s.to_bigints(), g.format));
            Outcome::Pass
        }
        Err(e) => {
            eprintln!("error: {e}");
            Outcome::Fail
        }
    }
}

fn cache_cmd(g: &GlobalOpts, cache: Option<&CoefficientCache>, action: &CacheAction) -> Outcome {
    let Some(cache) = cache else {
        return Outcome::Usage("no cache directory: pass --cache-dir or set QSER_CACHE_DIR".into());
    };
    match action {
        CacheAction::Info => match cache.info() {
            Ok(entries) => {
                for e in entries {
                    match (&e.header, g.format) {
                        (Ok(h), Format::Json) => println!(
                            "{}",
                            serde_json::json!({
                                "path": e.path.display().to_string(),
                                "key_hash": format!("{:016x}", h.key_hash),
                                "modulus": h.modulus,
                                "trunc": h.trunc,
                                "bytes": e.bytes,
                            })
                        ),
                        (Ok(h), _) => println!(
                            "{}  key {:016x}  {}  trunc {}  {} bytes",
                            e.path.display(),
                            h.key_hash,
                            Ring::from_option((h.modulus != 0).then_some(h.modulus)).map_or("?".into(), |r| r.to_string()),
                            h.trunc,
                            e.bytes
                        ),
                        (Err(err), _) => println!("{}  unreadable: {err}", e.path.display()),
                    }
                }
                Outcome::Pass
            }
            Err(e) => Outcome::Usage(e.to_string()),
        },
        CacheAction::Clear => match cache.clear() {
            Ok(n) => {
                println!("removed {n} cached tables from {}", cache.dir().display());
                Outcome::Pass
            }
            Err(e) => Outcome::Usage(e.to_string()),
        },
    }
}
