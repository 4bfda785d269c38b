//! The `lmrd` command line. Exit codes: 0 success, 1 verification failure,
//! 2 usage or precondition error.

pub mod codefile;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{self, AqResolver, BoundReport, BoundsError, Params, Prop0Outcome};
use crate::cdc::{self, Cdc};
use crate::gf::Field;
use crate::linalg::PivotVector;
use crate::qcomb;
use crate::rankmetric::{gabidulin, RankCode};
use crate::search::{self, SearchConfig, SearchError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lmrd",
    about = "Constant dimension codes containing lifted MRD codes"
)]
pub struct Cli {
    /// Print a machine-readable JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upper bound on codes that contain a lifted MRD code.
    Bound(BoundArgs),
    /// Build a code, verify it and write it.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Verify a code file.
    Verify(VerifyArgs),
    /// Randomized extension of the standard LMRD.
    Search(SearchArgs),
    /// Orbits of a cyclic group on subspaces meeting Γ in dimension t.
    Orbits(OrbitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Auto,
    Singleton,
    Prop1,
    Prop2,
    Prop0,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(short = 'q')]
    pub q: u32,
    #[arg(short = 'v')]
    pub v: i64,
    #[arg(short = 'd')]
    pub d: i64,
    #[arg(short = 'k')]
    pub k: i64,
    #[arg(long, value_enum, default_value = "auto")]
    pub rule: RuleArg,
    #[arg(long)]
    pub c: Option<i64>,
    #[arg(long)]
    pub y: Option<i64>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output path; `.gz` compresses. Without it the code goes to stdout.
    #[arg(short = 'o')]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// (6l, q^{3l(l+1)} + q^{2l} + q^l + 1, 4l; 3l)_q
    Family6l {
        #[arg(short = 'q', default_value_t = 2)]
        q: u32,
        #[arg(short = 'l', default_value_t = 1)]
        l: usize,
        #[command(flatten)]
        out: Output,
    },
    /// (6+3l, q^{(3+2l)(l+1)} + q^{2+l} + 1, 4+2l; 3+l)_q
    Family63l {
        #[arg(short = 'q', default_value_t = 2)]
        q: u32,
        #[arg(short = 'l', default_value_t = 1)]
        l: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Lifted Gabidulin code.
    Lmrd {
        #[arg(short = 'q')]
        q: u32,
        #[arg(short = 'v')]
        v: usize,
        #[arg(short = 'd')]
        d: usize,
        #[arg(short = 'k')]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    /// The (10, 32923, 6; 5)_2 code.
    Record1065 {
        #[command(flatten)]
        out: Output,
    },
    /// Echelon–Ferrers code from pivot vectors. The cell with pivots in the
    /// first k columns carries a Gabidulin code of minimum rank distance
    /// `delta`; every other cell carries the zero matrix.
    EchelonFerrers {
        #[arg(short = 'q', default_value_t = 2)]
        q: u32,
        /// Comma-separated pivot vectors, e.g. 111000,100110.
        #[arg(long, value_delimiter = ',')]
        skeleton: Vec<String>,
        #[arg(long, default_value_t = 1)]
        delta: usize,
        #[command(flatten)]
        out: Output,
    },
    /// All k-subspaces of F_q^v.
    Grassmannian {
        #[arg(short = 'q')]
        q: u32,
        #[arg(short = 'v')]
        v: usize,
        #[arg(short = 'k')]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub path: PathBuf,
    /// Required minimum distance; defaults to the header's d.
    #[arg(long)]
    pub expect_d: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(short = 'q')]
    pub q: u32,
    #[arg(short = 'v')]
    pub v: usize,
    #[arg(short = 'd')]
    pub d: usize,
    #[arg(short = 'k')]
    pub k: usize,
    /// Code file of d/2-subspaces, in F_q^{v-k} or inside Γ.
    #[arg(long)]
    pub subcode: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub n_max: usize,
    #[arg(long, default_value_t = 100)]
    pub r_max: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(short = 'q', default_value_t = 2)]
    pub q: u32,
    #[arg(short = 'v', default_value_t = 10)]
    pub v: usize,
    #[arg(short = 'k', default_value_t = 5)]
    pub k: usize,
    #[arg(short = 't', default_value_t = 3)]
    pub t: usize,
    /// Square generator matrix file; the built-in order-31 generator is used
    /// for q=2, v=10 when omitted.
    #[arg(long)]
    pub generator: Option<PathBuf>,
    /// Minimum distance; members may meet in at most k - d/2 dimensions.
    /// Defaults to 2(k - t + 1).
    #[arg(short = 'd')]
    pub d: Option<usize>,
    /// Clique size to look for; defaults to [v-k, t]_q / orbit length when
    /// all orbits have the same length.
    #[arg(long)]
    pub clique: Option<usize>,
    /// Check the built-in five representatives against the generator.
    #[arg(long)]
    pub verify_reps: bool,
}

/// Failure with an exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(m: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: m.to_string(),
    }
}

fn verify_fail(m: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_VERIFY,
        message: m.to_string(),
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Failure {
        usage(e)
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Failure {
        match e {
            SearchError::VerificationFailed(_) => verify_fail(e),
            _ => usage(e),
        }
    }
}

impl From<codefile::CodeFileError> for Failure {
    fn from(e: codefile::CodeFileError) -> Failure {
        usage(e)
    }
}

impl From<cdc::CdcError> for Failure {
    fn from(e: cdc::CdcError) -> Failure {
        usage(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        usage(e)
    }
}

struct Ctx<'a> {
    json: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn say(&mut self, s: impl AsRef<str>) {
        if !self.json {
            let _ = writeln!(self.out, "{}", s.as_ref());
        }
    }

    fn warn(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.err, "warning: {}", s.as_ref());
    }

    fn record(&mut self, v: Value) {
        if self.json {
            let _ = writeln!(
                self.out,
                "{}",
                serde_json::to_string_pretty(&v).expect("json")
            );
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let json = cli.json;
    let mut ctx = Ctx { json, out, err };
    let result = match cli.command {
        Command::Bound(a) => cmd_bound(&mut ctx, &a),
        Command::Construct { what } => cmd_construct(&mut ctx, what),
        Command::Verify(a) => cmd_verify(&mut ctx, &a),
        Command::Search(a) => cmd_search(&mut ctx, &a),
        Command::Orbits(a) => cmd_orbits(&mut ctx, &a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            if json {
                ctx.record(json!({ "error": f.message, "exit_code": f.code }));
            }
            let _ = writeln!(ctx.err, "error: {}", f.message);
            f.code
        }
    }
}

fn field(q: u32) -> Result<Field, Failure> {
    Field::new(q).map_err(usage)
}

fn cmd_bound(ctx: &mut Ctx, a: &BoundArgs) -> Result<i32, Failure> {
    let p = Params::new(a.q, a.v, a.d, a.k);
    if crate::gf::prime_power(a.q).is_none() {
        return Err(BoundsError::InvalidField(a.q).into());
    }
    let r = AqResolver::default();
    let report: Option<BoundReport> = match a.rule {
        RuleArg::Auto => {
            if p.check_standard().is_ok() {
                match bounds::prop0_bound(p, &r)? {
                    Prop0Outcome::Bound(b) => Some(b),
                    Prop0Outcome::NoLmrdBoundKnown => {
                        let mut b = r.resolve(a.q, a.v, a.d, a.k);
                        b.notes.push("k ≥ 3d/2: no bound for LMRD-containing codes is known; general upper bound shown".into());
                        Some(b)
                    }
                }
            } else {
                Some(r.resolve(a.q, a.v, a.d, a.k))
            }
        }
        RuleArg::Singleton => Some(BoundReport::new(
            p,
            bounds::singleton(p)?,
            bounds::Rule::Singleton,
        )),
        RuleArg::Prop1 => Some(bounds::prop1_bound(p, &r)?),
        RuleArg::Prop2 => {
            let (c, y) = match (a.c, a.y) {
                (Some(c), Some(y)) => (c, y),
                (Some(c), None) => (c, 1.max(a.k - a.d / 2 + 1 - c)),
                (None, y) => {
                    let (c, y0) = bounds::optimal_cy(p)?;
                    (c, y.unwrap_or(y0))
                }
            };
            Some(bounds::prop2_bound(p, c, y, &r)?)
        }
        RuleArg::Prop0 => match bounds::prop0_bound(p, &r)? {
            Prop0Outcome::Bound(b) => Some(b),
            Prop0Outcome::NoLmrdBoundKnown => None,
        },
    };
    match report {
        Some(b) => {
            ctx.say(format!("{} ≤ {}", b.params, b.value));
            ctx.say(format!("rule: {}", b.rule));
            ctx.say(b.trace().trim_end());
            ctx.record(serde_json::to_value(&b).expect("json"));
        }
        None => {
            ctx.say(format!(
                "{p}: no bound for LMRD-containing codes is known (k ≥ 3d/2)"
            ));
            ctx.record(json!({ "params": p, "kind": "no_lmrd_bound_known" }));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_construct(ctx: &mut Ctx, what: Construct) -> Result<i32, Failure> {
    let (code, out, label) = match what {
        Construct::Family6l { q, l, out } => (
            cdc::family_6l(&field(q)?, l)?,
            out,
            format!("family 6l, q={q}, l={l}"),
        ),
        Construct::Family63l { q, l, out } => (
            cdc::family_6_3l(&field(q)?, l)?,
            out,
            format!("family 6+3l, q={q}, l={l}"),
        ),
        Construct::Lmrd { q, v, d, k, out } => (
            cdc::standard_lmrd(&field(q)?, v, k, d)?,
            out,
            format!("LMRD q={q} v={v} d={d} k={k}"),
        ),
        Construct::Record1065 { out } => (
            search::record_code()?.0,
            out,
            "record (10, 32923, 6; 5)_2".to_string(),
        ),
        Construct::Grassmannian { q, v, k, out } => {
            let f = field(q)?;
            if k > v {
                return Err(usage(format!("k ≤ v violated (k={k}, v={v})")));
            }
            let d = if k == 0 || k == v { 0 } else { 2 };
            (
                Cdc::new(&f, v, k, d, crate::linalg::grassmannian(&f, v, k))?,
                out,
                format!("Grassmannian q={q} v={v} k={k}"),
            )
        }
        Construct::EchelonFerrers {
            q,
            skeleton,
            delta,
            out,
        } => {
            let f = field(q)?;
            let pvs: Vec<PivotVector> = skeleton
                .iter()
                .map(|s| {
                    s.parse::<PivotVector>()
                        .map_err(|e| usage(format!("pivot vector {s:?}: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let Some(first) = pvs.first() else {
                return Err(usage("--skeleton needs at least one pivot vector"));
            };
            let (v, k) = (first.len(), first.weight());
            let lead = PivotVector::from_positions(v, &(0..k).collect::<Vec<_>>());
            let cells: Vec<RankCode> = pvs
                .iter()
                .map(|p| {
                    if *p == lead && k > 0 && v > k {
                        gabidulin(&f, k, v - k, delta).map_err(usage)
                    } else {
                        Ok(RankCode::zero(&f, k, v - k))
                    }
                })
                .collect::<Result<_, _>>()?;
            (
                cdc::echelon_ferrers(&f, &pvs, &cells)?,
                out,
                format!("Echelon–Ferrers q={q} skeleton {}", skeleton.join(",")),
            )
        }
    };
    let ver = cdc::verify_cdc(&code);
    if !ver.meets_claim() {
        return Err(verify_fail(format!(
            "{label}: minimum distance {:?} below claimed {}; nothing written",
            ver.min_distance,
            code.claimed_d()
        )));
    }
    let (q, v, k, d, n) = (
        code.field().q(),
        code.v(),
        code.k(),
        code.claimed_d(),
        code.len(),
    );
    match &out.out {
        Some(path) => {
            codefile::write(path, &code)?;
            ctx.say(format!(
                "{label}: wrote ({v}, {n}, {d}; {k})_{q} to {}",
                path.display()
            ));
        }
        None if !ctx.json => {
            let _ = write!(ctx.out, "{}", codefile::serialize(&code));
        }
        None => {}
    }
    ctx.record(json!({
        "construction": label, "q": q, "v": v, "k": k, "d": d, "size": n,
        "verification": ver, "path": out.out.as_ref().map(|p| p.display().to_string()),
    }));
    Ok(EXIT_OK)
}

fn profile_json(code: &Cdc) -> (Option<cdc::StProfile>, Option<String>) {
    if code.claimed_d() < 2 || !code.claimed_d().is_multiple_of(2) || 2 * code.k() > code.v() {
        return (None, Some("no S_t profile for these parameters".into()));
    }
    match cdc::st_profile(code) {
        Ok(p) if p.lmrd_count > 0 => (Some(p), None),
        Ok(_) => (
            None,
            Some("code contains no standard LMRD codewords".into()),
        ),
        Err(e) => (None, Some(e.to_string())),
    }
}

/// Reads a code file, reporting dedup warnings even when the count check fails.
fn read_code(ctx: &mut Ctx, path: &std::path::Path) -> Result<codefile::CodeFile, Failure> {
    match codefile::read(path) {
        Ok(file) => {
            for w in &file.warnings {
                ctx.warn(w);
            }
            Ok(file)
        }
        Err(e) => {
            if let codefile::CodeFileError::CountMismatch {
                distinct, blocks, ..
            } = &e
            {
                if blocks > distinct {
                    ctx.warn(format!(
                        "dedup: removed {} duplicate codewords",
                        blocks - distinct
                    ));
                }
            }
            Err(e.into())
        }
    }
}

fn cmd_verify(ctx: &mut Ctx, a: &VerifyArgs) -> Result<i32, Failure> {
    let file = read_code(ctx, &a.path)?;
    let code = file.code;
    let expect = a.expect_d.unwrap_or(code.claimed_d());
    let ver = cdc::verify_cdc(&code);
    let ok = ver.min_distance.is_none_or(|m| m >= expect);
    let (profile, why) = profile_json(&code);
    let f = code.field();
    ctx.say(format!(
        "({}, {}, {}; {})_{} code as claimed",
        code.v(),
        code.len(),
        code.claimed_d(),
        code.k(),
        f.q()
    ));
    match ver.min_distance {
        Some(m) => ctx.say(format!("minimum distance: {m} (via {:?})", ver.route)),
        None => ctx.say("minimum distance: undefined (fewer than two codewords)"),
    }
    if let Some(p) = &profile {
        let parts: Vec<String> = p.counts.iter().map(|(t, c)| format!("S_{t}={c}")).collect();
        ctx.say(format!(
            "LMRD codewords: {}; {}",
            p.lmrd_count,
            parts.join(", ")
        ));
    }
    if !ok {
        if let Some((i, j)) = ver.witness {
            let cw = code.codewords();
            ctx.say(format!(
                "witness pair {i}, {j}: {:?} / {:?}",
                cw[i].to_strings(),
                cw[j].to_strings()
            ));
        }
    }
    ctx.record(json!({
        "q": f.q(), "v": code.v(), "k": code.k(), "size": code.len(), "expected_d": expect,
        "verification": ver, "st_profile": profile, "st_profile_note": why,
        "warnings": file.warnings, "ok": ok,
    }));
    if ok {
        Ok(EXIT_OK)
    } else {
        Err(verify_fail(format!(
            "minimum distance {:?} is below {expect}",
            ver.min_distance
        )))
    }
}

fn cmd_search(ctx: &mut Ctx, a: &SearchArgs) -> Result<i32, Failure> {
    let f = field(a.q)?;
    let sub = read_code(ctx, &a.subcode)?;
    if sub.code.field() != &f {
        return Err(usage(format!(
            "subcode is over GF({}), expected GF({})",
            sub.code.field().q(),
            a.q
        )));
    }
    let seed = match a.seed {
        Some(s) => s,
        None => {
            let s = rand::random::<u64>();
            let _ = writeln!(ctx.err, "seed: {s}");
            s
        }
    };
    let cfg = SearchConfig {
        subcode: sub.code,
        n_max: a.n_max,
        r_max: a.r_max,
        seed,
    };
    let outcome = search::extend_lmrd(&cfg, a.v, a.k, a.d)?;
    let lmrd = cdc::standard_lmrd(&f, a.v, a.k, a.d)?;
    let code = lmrd.union(&outcome.extension)?;
    // the extension is checked inside extend_lmrd; the cross pairs are checked here
    let mrd_rank = a.d / 2;
    let report = search::verify_lmrd_extension(&lmrd, mrd_rank, &outcome.extension);
    if report.min_distance < a.d {
        return Err(verify_fail(format!(
            "union has minimum distance {}",
            report.min_distance
        )));
    }
    for (i, n) in outcome.per_restart.iter().enumerate() {
        ctx.say(format!("restart {i}: {n} accepted"));
    }
    ctx.say(format!(
        "seed {seed}; best restart {}; extension {}; total {}",
        outcome.best_restart,
        outcome.extension.len(),
        code.len()
    ));
    if let Some(path) = &a.out.out {
        codefile::write(path, &code)?;
        ctx.say(format!("wrote {}", path.display()));
    }
    ctx.record(json!({
        "seed": seed, "per_restart": outcome.per_restart, "best_restart": outcome.best_restart,
        "extension": outcome.extension.len(), "size": code.len(), "min_distance": report.min_distance,
        "path": a.out.out.as_ref().map(|p| p.display().to_string()),
    }));
    Ok(EXIT_OK)
}

fn cmd_orbits(ctx: &mut Ctx, a: &OrbitArgs) -> Result<i32, Failure> {
    let f = field(a.q)?;
    if a.k > a.v || a.t > a.k || a.t > a.v - a.k {
        return Err(usage(format!(
            "need t ≤ k ≤ v and t ≤ v-k (v={}, k={}, t={})",
            a.v, a.k, a.t
        )));
    }
    let g = match &a.generator {
        Some(p) => codefile::parse_matrix(&f, &codefile::read_text(p)?)?,
        None if a.q == 2 && a.v == 10 => search::record_generator(),
        None => return Err(usage("--generator is required unless q=2 and v=10")),
    };
    if g.rows() != a.v {
        return Err(usage(format!(
            "generator is {}x{}, expected {}x{}",
            g.rows(),
            g.cols(),
            a.v,
            a.v
        )));
    }
    if g.inverse().is_err() {
        return Err(usage("generator is not invertible"));
    }
    let d = a.d.unwrap_or(2 * (a.k - a.t + 1));
    let max_meet =
        a.k.checked_sub(d / 2)
            .ok_or_else(|| usage(format!("d/2 ≤ k violated (d={d}, k={})", a.k)))?;
    let universe = search::meet_universe(&f, a.v, a.k, a.t);
    let orbits = search::orbit_partition(&g, &universe)?;
    let (clean, dirty) = search::filter_conflicting_orbits(orbits, max_meet);
    let stats = search::orbit_stats(universe.len(), &clean, &dirty);
    ctx.say(format!(
        "{} subspaces, {} orbits, {} dirty, {} clean",
        stats.universe, stats.orbits, stats.dirty, stats.clean
    ));
    let lengths: Vec<String> = stats
        .lengths
        .iter()
        .map(|(l, n)| format!("{n} of length {l}"))
        .collect();
    ctx.say(format!("orbit lengths: {}", lengths.join(", ")));

    let target = a.clique.or_else(|| match stats.lengths.as_slice() {
        [(len, _)] if a.t > max_meet => {
            let n = qcomb::q_binomial((a.v - a.k) as i64, a.t as i64, a.q);
            u64::try_from(n).ok().map(|n| (n / *len as u64) as usize)
        }
        _ => None,
    });
    let mut clique_json = Value::Null;
    if let Some(target) = target {
        match search::greedy_clique(&clean, max_meet, target, clean.len()) {
            Some(c) => {
                ctx.say(format!("clique {}", c.len()));
                let reps: Vec<Vec<String>> = c
                    .iter()
                    .map(|&i| clean[i].representative.to_strings())
                    .collect();
                for r in &reps {
                    ctx.say(format!("  {}", r.join(" ")));
                }
                clique_json = json!({ "target": target, "found": true, "representatives": reps });
            }
            None => {
                ctx.say(format!("no clique of size {target} found"));
                clique_json = json!({ "target": target, "found": false });
            }
        }
    }
    let mut code = EXIT_OK;
    let mut reps_json = Value::Null;
    if a.verify_reps {
        if (a.q, a.v, a.k, a.t) != (2, 10, 5, 3) {
            return Err(usage("--verify-reps needs q=2, v=10, k=5, t=3"));
        }
        let check = search::check_representatives(
            &g,
            &search::record_representatives(),
            a.k,
            a.t,
            max_meet,
        )?;
        ctx.say(format!(
            "built-in representatives: lengths {:?}, clean {}, pairwise compatible {}, union {}, cover Γ exactly once {}",
            check.orbit_lengths, check.all_clean, check.pairwise_compatible, check.union_size, check.covers_gamma_exactly_once
        ));
        if !check.ok() {
            code = EXIT_VERIFY;
            ctx.warn("the built-in representatives do not form an extension under this generator");
        }
        reps_json = serde_json::to_value(&check).expect("json");
    }
    ctx.record(json!({ "stats": stats, "clique": clique_json, "representatives_check": reps_json, "d": d }));
    Ok(code)
}
