//! `digitop`: build, check, search and convert digital-topology witnesses.
//!
//! Every invocation prints one JSON report on standard output. Exit codes:
//! 0 pass or found, 1 fail, 2 not within budget or not stable, 3 usage or
//! input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use digitop::constructions::{self as cons, Certificate as AnyCert};
use digitop::ecpath::{self, LoopBudget, LoopClass};
use digitop::json::ecpath_from_json;
use digitop::longhtpy::{finite_to_long, l_to_long, long_to_finite};
use digitop::realhtpy::{long_to_real, real_to_finite};
use digitop::search::{self, Search, SearchLimits, SearchStats, DEFAULT_STATE_CAP};
use digitop::similarity::{
    extract_equivalence_when_stable, from_equivalence, induced_pi1_map, verify_similarity, Stable,
};
use digitop::{
    Certificate, DigitalImage, DigitalMap, ECHomotopy, ECPath, EquivalenceCertificate, Error, Homotopy, Json,
    LHomotopy, LongEquivalenceCertificate, LongHomotopy, Point, RealEquivalenceCertificate, RealHomotopy,
    SimilarityCertificate, Verdict,
};

const STATE_CAP_VAR: &str = "DIGITOP_STATE_CAP";

#[derive(Parser)]
#[command(name = "digitop", version, about = "Exact homotopy witnesses on finite digital images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate built-in images, witnesses and certificates.
    #[command(subcommand)]
    Build(Build),
    /// Verify a witness or certificate.
    #[command(subcommand)]
    Check(Check),
    /// Breadth-first search for a homotopy within a step budget.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Convert a homotopy or certificate along a proven implication.
    Convert(Convert),
    /// Loop classes and induced maps on eventually constant loops.
    #[command(subcommand)]
    Pi1(Pi1),
}

#[derive(Subcommand)]
enum Build {
    /// Box of radius r around a center in Z^dim.
    Cube {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 1)]
        u: usize,
        /// Comma-separated center; the origin by default.
        #[arg(long, value_parser = parse_point)]
        center: Option<Point>,
        #[arg(long, value_enum, default_value_t = CubeOutput::Contraction)]
        what: CubeOutput,
        /// Number of levels for `--what similarity`.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parent contraction of a tree image.
    Tree {
        /// Image file whose adjacency graph is a tree.
        #[arg(long, alias = "edges")]
        image: PathBuf,
        #[arg(long, value_parser = parse_point)]
        root: Point,
        #[arg(long, value_enum, default_value_t = TreeOutput::Contraction)]
        what: TreeOutput,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Windows of the line and the T-shaped image, and their certificates.
    TImage {
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = TOutput::Similarity)]
        what: TOutput,
        /// Levels of the similarity certificate; `radius + 1` by default.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// One-point union of two images, maps or certificates.
    Wedge(Parts),
    /// Cartesian product of images, maps or certificates.
    Product(Parts),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PartSource {
    #[arg(long, num_args = 1..)]
    images: Vec<PathBuf>,
    #[arg(long, num_args = 1..)]
    maps: Vec<PathBuf>,
    #[arg(long, num_args = 1..)]
    certs: Vec<PathBuf>,
}

#[derive(Args)]
struct Parts {
    #[command(flatten)]
    source: PartSource,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CubeOutput {
    Image,
    Contraction,
    Equivalence,
    Similarity,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeOutput {
    Contraction,
    LHomotopy,
    Equivalence,
    Similarity,
}

#[derive(Clone, Copy, ValueEnum)]
enum TOutput {
    XWindow,
    YWindow,
    Similarity,
    Long,
}

#[derive(Args)]
struct Endpoints {
    #[arg(long)]
    witness: PathBuf,
    #[arg(long)]
    from: PathBuf,
    #[arg(long)]
    to: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct WitnessOrCert {
    #[arg(long, requires_all = ["from", "to"])]
    witness: Option<PathBuf>,
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct EitherCheck {
    #[command(flatten)]
    input: WitnessOrCert,
    #[arg(long)]
    from: Option<PathBuf>,
    #[arg(long)]
    to: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Check {
    /// Adjacent points go to equal or adjacent points.
    Continuity {
        #[arg(long)]
        map: PathBuf,
    },
    /// Finite homotopy from `--from` to `--to`.
    Homotopy(Endpoints),
    /// Equivalence certificate of any kind.
    Equivalence {
        #[arg(long)]
        cert: PathBuf,
    },
    /// l-homotopy from `--from` to `--to`.
    LHomotopy(Endpoints),
    /// Long homotopy, or long-equivalence certificate.
    Long(EitherCheck),
    /// Real homotopy, or real-equivalence certificate.
    Real(EitherCheck),
    /// Similarity certificate up to `--depth` levels.
    Similarity {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// EC homotopy between two eventually constant path files.
    EcHomotopy(Endpoints),
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Homotopy from one map to another.
    Homotopy {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        max_steps: usize,
        /// Hold this point fixed.
        #[arg(long, value_parser = parse_point)]
        fixed: Option<Point>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homotopy from the identity to some constant map.
    Contraction {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        max_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Finite,
    L,
    Long,
    Real,
    Similarity,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Finite => "finite",
            Kind::L => "l",
            Kind::Long => "long",
            Kind::Real => "real",
            Kind::Similarity => "similarity",
        }
    }
}

#[derive(Args)]
struct Convert {
    #[arg(long = "from", value_enum)]
    from_kind: Kind,
    #[arg(long = "to", value_enum)]
    to_kind: Kind,
    #[arg(long)]
    input: PathBuf,
    /// The input is an equivalence certificate rather than a homotopy.
    #[arg(long)]
    certificate: bool,
    /// Levels of a similarity certificate built from a finite one.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Pi1 {
    /// Budgeted search for an endpoint-fixed EC homotopy between two loops.
    CheckEqual {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Image for path files that do not carry one.
        #[arg(long)]
        image: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        /// Column horizon; `2N + 4` for the larger stabilization index `N` by default.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The loop `h ∘ L`.
    Push {
        #[arg(long)]
        map: PathBuf,
        #[arg(long = "loop")]
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// The image of a loop under a pointed similarity certificate.
    Induced {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long = "loop")]
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_point(s: &str) -> Result<Point, String> {
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|e| format!("bad coordinate {c:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Point::new(coords).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input { file: Option<PathBuf>, error: Error },
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError::Input { file: None, error }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy)]
enum Status {
    Pass,
    Fail,
    NotWithinBudget,
    NotStable,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotWithinBudget => "not-within-budget",
            Status::NotStable => "not-stable",
        }
    }

    fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::NotWithinBudget | Status::NotStable => 2,
        }
    }
}

struct Report {
    status: Status,
    fields: Map<String, Value>,
}

impl Report {
    fn new(status: Status) -> Self {
        Report { status, fields: Map::new() }
    }

    fn pass() -> Self {
        Report::new(Status::Pass)
    }

    fn verdict(v: Verdict) -> Self {
        match v {
            Ok(()) => Report::pass(),
            Err(v) => Report::new(Status::Fail).with("clause", v.clause).with("detail", v.detail),
        }
    }

    fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    fn with_stats(self, stats: SearchStats) -> Self {
        self.with("budget_used", json!({ "visited": stats.visited, "depth": stats.depth }))
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load<T: Json>(path: &Path) -> CliResult<T> {
    T::from_json(&read(path)?).map_err(|error| CliError::Input { file: Some(path.to_path_buf()), error })
}

fn write(path: &Path, text: &str) -> CliResult<Value> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(Value::String(path.display().to_string()))
}

fn emit<T: Json>(report: Report, path: &Path, value: &T) -> CliResult<Report> {
    let p = write(path, &value.to_json())?;
    Ok(report.with("witness_path", p))
}

fn limits() -> CliResult<SearchLimits> {
    match std::env::var(STATE_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|state_cap| SearchLimits { state_cap })
            .map_err(|e| CliError::Usage(format!("{STATE_CAP_VAR}={v:?}: {e}"))),
        Err(_) => Ok(SearchLimits { state_cap: DEFAULT_STATE_CAP }),
    }
}

fn search_report(out: CliResult<Search<Homotopy>>, path: Option<&Path>) -> CliResult<Report> {
    match out {
        Ok(Search::Found { witness, stats }) => {
            let r = Report::pass().with_stats(stats).with("steps", witness.steps());
            match path {
                Some(p) => emit(r, p, &witness),
                None => Ok(r),
            }
        }
        Ok(Search::NotWithinBudget { stats }) => Ok(Report::new(Status::NotWithinBudget).with_stats(stats)),
        Err(CliError::Input { error: Error::StateCapExceeded { visited, cap }, .. }) => {
            Ok(Report::new(Status::NotWithinBudget).with("budget_used", json!({ "visited": visited, "cap": cap })))
        }
        Err(e) => Err(e),
    }
}

fn build(cmd: Build) -> CliResult<Report> {
    match cmd {
        Build::Cube { dim, radius, u, center, what, depth, out } => {
            let kind = digitop::lattice::AdjacencyKind::new(dim, u)?;
            let center = center.unwrap_or(Point::new(vec![0; dim])?);
            let r = Report::pass().with("points", (2 * radius + 1).pow(dim as u32));
            match what {
                CubeOutput::Image => emit(r, &out, &cons::cube(&center, radius, kind)?),
                CubeOutput::Contraction => {
                    let h = cons::cube_contraction(&center, radius, kind)?;
                    let r = r
                        .with("horizon", h.horizon())
                        .with("max_stabilization", h.stab().iter().copied().max().unwrap_or(0));
                    emit(r, &out, &h)
                }
                CubeOutput::Equivalence => {
                    emit(r, &out, &Certificate::Plain(cons::cube_equivalence(&center, radius, kind)?))
                }
                CubeOutput::Similarity => emit(
                    r.with("depth", depth),
                    &out,
                    &Certificate::Similarity(cons::cube_similarity(&center, kind, depth)?),
                ),
            }
        }
        Build::Tree { image, root, what, depth, out } => {
            let img: DigitalImage = load(&image)?;
            let tree = cons::TreeImage::new(img, root)?;
            let r = Report::pass().with("eccentricity", tree.eccentricity());
            match what {
                TreeOutput::Contraction => emit(r, &out, &cons::tree_contraction(&tree)?),
                TreeOutput::LHomotopy => emit(r, &out, &cons::tree_l_homotopy(&tree)?),
                TreeOutput::Equivalence => emit(r, &out, &Certificate::Plain(cons::tree_equivalence(&tree)?)),
                TreeOutput::Similarity => {
                    emit(r.with("depth", depth), &out, &Certificate::Similarity(cons::tree_similarity(&tree, depth)?))
                }
            }
        }
        Build::TImage { radius, what, depth, out } => {
            let t = cons::t_image::<digitop::Int>(radius)?;
            let r = Report::pass().with("x_points", t.x.image().len()).with("y_points", t.y.image().len());
            match what {
                TOutput::XWindow => emit(r, &out, t.x.image()),
                TOutput::YWindow => emit(r, &out, t.y.image()),
                TOutput::Similarity => {
                    let depth = depth.unwrap_or(radius + 1);
                    emit(r.with("depth", depth), &out, &Certificate::Similarity(cons::t_image_similarity(depth)?))
                }
                TOutput::Long => emit(r, &out, &Certificate::Long(cons::t_image_long(radius)?)),
            }
        }
        Build::Wedge(parts) => build_parts(parts, true),
        Build::Product(parts) => build_parts(parts, false),
    }
}

fn build_parts(parts: Parts, is_wedge: bool) -> CliResult<Report> {
    let PartSource { images, maps, certs } = parts.source;
    let pair = |n: usize| -> CliResult<()> {
        if is_wedge && n != 2 {
            return Err(CliError::Usage(format!("a wedge takes two components, got {n}")));
        }
        Ok(())
    };
    let r = Report::pass();
    if !images.is_empty() {
        pair(images.len())?;
        let xs = images.iter().map(|p| load::<DigitalImage>(p)).collect::<CliResult<Vec<_>>>()?;
        if is_wedge {
            let w = cons::wedge(&xs[0], &xs[1])?;
            let r = r.with("wedge_point", w.wedge_point().to_string()).with("points", w.image().len());
            emit(r, &parts.out, w.image())
        } else {
            let p = cons::product(&xs)?;
            emit(r.with("points", p.image().len()), &parts.out, p.image())
        }
    } else if !maps.is_empty() {
        pair(maps.len())?;
        let fs = maps.iter().map(|p| load::<DigitalMap>(p)).collect::<CliResult<Vec<_>>>()?;
        let m = if is_wedge {
            cons::wedge_map(&fs[0], &fs[1])?
        } else {
            cons::product_map(&fs.iter().collect::<Vec<_>>())?
        };
        emit(r, &parts.out, &m)
    } else {
        pair(certs.len())?;
        let cs = certs.iter().map(|p| load::<Certificate>(p)).collect::<CliResult<Vec<_>>>()?;
        let c = if is_wedge { cons::wedge_certificates(&cs[0], &cs[1])? } else { cons::product_certificates(&cs)? };
        let r = r.with("kind", c.kind());
        emit(r, &parts.out, &c)
    }
}

fn check(cmd: Check) -> CliResult<Report> {
    match cmd {
        Check::Continuity { map } => {
            let f: DigitalMap = load(&map)?;
            Ok(match f.continuity_violation() {
                None => Report::pass(),
                Some((a, b)) => Report::new(Status::Fail).with("clause", "continuity").with(
                    "detail",
                    format!("{a} and {b} are adjacent but their values are neither equal nor adjacent"),
                ),
            })
        }
        Check::Homotopy(e) => {
            let h: Homotopy = load(&e.witness)?;
            let (f, g): (DigitalMap, DigitalMap) = (load(&e.from)?, load(&e.to)?);
            Ok(Report::verdict(h.verify(&f, &g)).with("steps", h.steps()))
        }
        Check::Equivalence { cert } => {
            let c: Certificate = load(&cert)?;
            Ok(Report::verdict(c.verify()).with("kind", c.kind()))
        }
        Check::LHomotopy(e) => {
            let h: LHomotopy = load(&e.witness)?;
            let (f, g): (DigitalMap, DigitalMap) = (load(&e.from)?, load(&e.to)?);
            Ok(Report::verdict(h.verify(&f, &g)).with("horizon", h.horizon()))
        }
        Check::Long(c) => match (c.input.witness, c.input.cert) {
            (_, Some(cert)) => Ok(Report::verdict(load::<LongEquivalenceCertificate>(&cert)?.verify())),
            (Some(w), None) => {
                let h: LongHomotopy = load(&w)?;
                let (f, g) = endpoints(c.from, c.to)?;
                Ok(Report::verdict(h.verify(&f, &g)).with("t_max", h.t_max()))
            }
            (None, None) => Err(CliError::Usage("give --witness or --cert".into())),
        },
        Check::Real(c) => match (c.input.witness, c.input.cert) {
            (_, Some(cert)) => Ok(Report::verdict(load::<RealEquivalenceCertificate>(&cert)?.verify())),
            (Some(w), None) => {
                let h: RealHomotopy = load(&w)?;
                let (f, g) = endpoints(c.from, c.to)?;
                Ok(Report::verdict(h.verify(&f, &g)).with("jumps", h.jumps().len()))
            }
            (None, None) => Err(CliError::Usage("give --witness or --cert".into())),
        },
        Check::Similarity { cert, depth } => {
            let c: SimilarityCertificate = load(&cert)?;
            let d = depth.unwrap_or(c.depth());
            let r = Report::verdict(verify_similarity(&c, Some(d)))
                .with("depth", d)
                .with("scope", "levels below depth only");
            Ok(match extract_equivalence_when_stable(&c) {
                Stable::Level { level, .. } => r.with("stable_from", level),
                Stable::NotStable => r,
            })
        }
        Check::EcHomotopy(e) => {
            let h: ECHomotopy = load(&e.witness)?;
            let image = h
                .rows
                .first()
                .map(|r| r.image().clone())
                .ok_or_else(|| CliError::Usage("the witness has no rows".into()))?;
            let f = load_path(&e.from, Some(&image))?;
            let g = load_path(&e.to, Some(&image))?;
            Ok(Report::verdict(h.verify(&f, &g)).with("rows", h.rows.len()))
        }
    }
}

fn endpoints(from: Option<PathBuf>, to: Option<PathBuf>) -> CliResult<(DigitalMap, DigitalMap)> {
    match (from, to) {
        (Some(f), Some(g)) => Ok((load(&f)?, load(&g)?)),
        _ => Err(CliError::Usage("a witness needs --from and --to".into())),
    }
}

fn load_path(path: &Path, image: Option<&DigitalImage>) -> CliResult<ECPath> {
    ecpath_from_json(&read(path)?, image).map_err(|error| CliError::Input { file: Some(path.to_path_buf()), error })
}

fn search_cmd(cmd: SearchCmd) -> CliResult<Report> {
    let limits = limits()?;
    match cmd {
        SearchCmd::Homotopy { from, to, max_steps, fixed, out } => {
            let (f, g): (DigitalMap, DigitalMap) = (load(&from)?, load(&to)?);
            let res = match &fixed {
                Some(x0) => search::search_pointed_homotopy(&f, &g, x0, max_steps, &limits),
                None => search::search_homotopy(&f, &g, max_steps, &limits),
            };
            search_report(res.map_err(CliError::from), out.as_deref()).map(|r| r.with("max_steps", max_steps))
        }
        SearchCmd::Contraction { image, max_steps, out } => {
            let x: DigitalImage = load(&image)?;
            let res = search::search_contraction(&x, max_steps, &limits);
            search_report(res.map_err(CliError::from), out.as_deref()).map(|r| r.with("max_steps", max_steps))
        }
    }
}

fn convert(c: Convert) -> CliResult<Report> {
    use Kind::*;
    let (from, to) = (c.from_kind, c.to_kind);
    let refuse =
        |why: &str| Err(CliError::Usage(format!("no conversion from {} to {}: {why}", from.name(), to.name())));
    match (from, to) {
        (Real, Long) | (Real, L) | (Finite, L) | (Long, L) => {
            return refuse("this implication is an open question, so no witness can be produced");
        }
        (a, b) if a == b => return refuse("the kinds are the same"),
        (L, _) if c.certificate => return refuse("there are no l-equivalence certificates"),
        (Similarity, _) | (_, Similarity) if !c.certificate => {
            return refuse("similarity applies to certificates only")
        }
        (Similarity, Long | Real) | (Long | Real, Similarity) => {
            return refuse("similarity certificates convert only to and from finite certificates");
        }
        _ => {}
    }
    let r = Report::pass().with("from", from.name()).with("to", to.name());
    if from == Similarity {
        let cert: SimilarityCertificate = load(&c.input)?;
        return match extract_equivalence_when_stable(&cert) {
            Stable::Level { level, cert } => emit(r.with("level", level), &c.out, &Certificate::Plain(cert)),
            Stable::NotStable => Ok(Report::new(Status::NotStable).with("depth", cert.depth())),
        };
    }
    if to == Similarity {
        let cert: EquivalenceCertificate = load(&c.input)?;
        let out = from_equivalence(&cert, c.depth);
        return match out.verify() {
            Ok(()) => emit(r.with("depth", out.depth()), &c.out, &Certificate::Similarity(out)),
            Err(v) => Ok(Report::verdict(Err(v))),
        };
    }
    if c.certificate {
        let cert: Certificate = load(&c.input)?;
        let out = convert_certificate(cert, to)?;
        return match out.verify() {
            Ok(()) => emit(r, &c.out, &out),
            Err(v) => Ok(Report::verdict(Err(v))),
        };
    }
    let long = match from {
        Finite => finite_to_long(&load::<Homotopy>(&c.input)?),
        L => l_to_long(&load::<LHomotopy>(&c.input)?),
        Long => load::<LongHomotopy>(&c.input)?,
        Similarity => unreachable!("handled above"),
        Real => {
            let h = real_to_finite(&load::<RealHomotopy>(&c.input)?);
            return emit(r.with("steps", h.steps()), &c.out, &h);
        }
    };
    match to {
        Long => emit(r.with("t_max", long.t_max()), &c.out, &long),
        Finite => {
            let h = long_to_finite(&long);
            emit(r.with("steps", h.steps()), &c.out, &h)
        }
        Real => {
            let h: RealHomotopy = long_to_real(&long);
            emit(r.with("jumps", h.jumps().len()), &c.out, &h)
        }
        L | Similarity => unreachable!("refused above"),
    }
}

fn convert_certificate(cert: Certificate, to: Kind) -> CliResult<Certificate> {
    let mismatch = |k: &str| CliError::Usage(format!("--from does not match the certificate kind {k}"));
    let finite = |c: &Certificate| -> CliResult<EquivalenceCertificate> {
        match c {
            AnyCert::Plain(e) => Ok(e.clone()),
            AnyCert::Long(e) => Ok(EquivalenceCertificate {
                f: e.f.clone(),
                g: e.g.clone(),
                h: long_to_finite(&e.h),
                k: long_to_finite(&e.k),
                basepoints: e.basepoints.clone(),
            }),
            AnyCert::Real(e) => Ok(EquivalenceCertificate {
                f: e.f.clone(),
                g: e.g.clone(),
                h: real_to_finite(&e.h),
                k: real_to_finite(&e.k),
                basepoints: e.basepoints.clone(),
            }),
            AnyCert::Similarity(_) => Err(mismatch("similarity")),
        }
    };
    Ok(match (to, &cert) {
        (Kind::Finite, _) => AnyCert::Plain(finite(&cert)?),
        (Kind::Long, AnyCert::Plain(e)) => AnyCert::Long(LongEquivalenceCertificate::from_finite(e)),
        (Kind::Real, AnyCert::Plain(e)) => AnyCert::Real(RealEquivalenceCertificate::from_finite(e)),
        (Kind::Real, AnyCert::Long(e)) => AnyCert::Real(RealEquivalenceCertificate {
            f: e.f.clone(),
            g: e.g.clone(),
            h: long_to_real(&e.h),
            k: long_to_real(&e.k),
            basepoints: e.basepoints.clone(),
        }),
        (_, c) => return Err(mismatch(c.kind())),
    })
}

fn pi1(cmd: Pi1) -> CliResult<Report> {
    match cmd {
        Pi1::CheckEqual { left, right, image, rows, horizon, out } => {
            let image = image.map(|p| load::<DigitalImage>(&p)).transpose()?;
            let f = load_path(&left, image.as_ref())?;
            let g = load_path(&right, image.as_ref())?;
            let horizon = horizon.unwrap_or(2 * f.stabilization_index().max(g.stabilization_index()) + 4);
            let budget = LoopBudget { rows, horizon };
            let r = |s| Report::new(s).with("rows", rows).with("horizon", horizon);
            match ecpath::loops_equal_within_budget(&f, &g, budget, &limits()?)? {
                LoopClass::Equal(h) => {
                    let r = r(Status::Pass).with("witness_rows", h.rows.len());
                    match out {
                        Some(p) => emit(r, &p, &h),
                        None => Ok(r),
                    }
                }
                LoopClass::Unknown { stats } => Ok(r(Status::NotWithinBudget).with_stats(stats)),
            }
        }
        Pi1::Push { map, path, out } => {
            let h: DigitalMap = load(&map)?;
            let l = load_path(&path, Some(h.domain()))?;
            emit(Report::pass(), &out, &ecpath::push_loop(&h, &l)?)
        }
        Pi1::Induced { cert, path, out } => {
            let c: SimilarityCertificate = load(&cert)?;
            let l = load_path(&path, None)?;
            let (level, pushed) = induced_pi1_map(&c, &l)?;
            emit(Report::pass().with("level", level), &out, &pushed)
        }
    }
}

fn command_name(c: &Command) -> String {
    let sub = |s: &str| s.to_string();
    match c {
        Command::Build(b) => format!(
            "build {}",
            match b {
                Build::Cube { .. } => "cube",
                Build::Tree { .. } => "tree",
                Build::TImage { .. } => "t-image",
                Build::Wedge(_) => "wedge",
                Build::Product(_) => "product",
            }
        ),
        Command::Check(k) => format!(
            "check {}",
            match k {
                Check::Continuity { .. } => "continuity",
                Check::Homotopy(_) => "homotopy",
                Check::Equivalence { .. } => "equivalence",
                Check::LHomotopy(_) => "l-homotopy",
                Check::Long(_) => "long",
                Check::Real(_) => "real",
                Check::Similarity { .. } => "similarity",
                Check::EcHomotopy(_) => "ec-homotopy",
            }
        ),
        Command::Search(SearchCmd::Homotopy { .. }) => sub("search homotopy"),
        Command::Search(SearchCmd::Contraction { .. }) => sub("search contraction"),
        Command::Convert(_) => sub("convert"),
        Command::Pi1(p) => format!(
            "pi1 {}",
            match p {
                Pi1::CheckEqual { .. } => "check-equal",
                Pi1::Push { .. } => "push",
                Pi1::Induced { .. } => "induced",
            }
        ),
    }
}

fn print(v: Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("reports serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            print(json!({ "status": "error", "message": e.kind().to_string(), "usage": e.to_string() }));
            return ExitCode::from(3);
        }
    };
    let name = command_name(&cli.command);
    let result = match cli.command {
        Command::Build(b) => build(b),
        Command::Check(c) => check(c),
        Command::Search(s) => search_cmd(s),
        Command::Convert(c) => convert(c),
        Command::Pi1(p) => pi1(p),
    };
    match result {
        Ok(report) => {
            let mut fields = report.fields;
            fields.insert("command".into(), name.into());
            fields.insert("status".into(), report.status.name().into());
            print(Value::Object(fields));
            ExitCode::from(report.status.code())
        }
        Err(err) => {
            let mut fields = Map::new();
            fields.insert("command".into(), name.into());
            fields.insert("status".into(), "error".into());
            match err {
                CliError::Usage(m) => {
                    fields.insert("message".into(), m.into());
                }
                CliError::Input { file, error } => {
                    if let Some(f) = file {
                        fields.insert("file".into(), f.display().to_string().into());
                    }
                    if let Error::Schema { path, .. } = &error {
                        fields.insert("path".into(), path.clone().into());
                    }
                    fields.insert("message".into(), error.to_string().into());
                }
            }
            print(Value::Object(fields));
            ExitCode::from(3)
        }
    }
}
