//! One verification driver per generating-function identity.
//!
//! Each driver builds the enumeration side and the closed form under the
//! identity's grading plan, at one or more exact rational specialization
//! points drawn from a seeded pool, and compares truncated term maps for
//! exact equality on the user window. Pole hits redraw the point; a
//! coefficient mismatch fails the check with the offending monomial.

pub mod closed;
pub mod lhs;

use crate::error::{CheckError, SeriesError};
use crate::report::{CheckReport, Witness};
use crate::rng::Rng;
use crate::series::SeriesContext;
use crate::stat::Domain;
use crate::{int, Coeff, Series};
use lhs::{lhs_series, LhsPlan, Mode};
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

/// Closed enumeration of the verifiable identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaId {
    /// Bigraded double-sum form of the (des, ides) pair.
    Gg1,
    /// Single-sum middle form of the same pair, graded at u = infinity.
    Cor1Mid,
    /// Quadruple (des, ides, rmax, lmin) closed form plus its v/q swap.
    Thm1,
    /// Triple (des, ides, rmax) closed form, direct u-grading.
    Adr1,
    /// Triple closed form, reciprocal grading.
    Adr2,
    /// Quadruple (des, ides, rmax, lmax) closed form with nested evaluation.
    Thm4,
    /// Triple (des, lmax, lmin) closed form.
    Asczeromax,
    /// Five-parameter symmetric Pochhammer-ratio series.
    H1Tilde,
    /// Its a = 1/t limit, resummed geometrically.
    H1,
    /// The second symmetric family and its u-at-infinity limit.
    H2,
    /// The two-sided series transformation with terminating parameter.
    Tf43,
}

impl FormulaId {
    pub const ALL: [FormulaId; 11] = [
        FormulaId::Gg1,
        FormulaId::Cor1Mid,
        FormulaId::Thm1,
        FormulaId::Adr1,
        FormulaId::Adr2,
        FormulaId::Thm4,
        FormulaId::Asczeromax,
        FormulaId::H1Tilde,
        FormulaId::H1,
        FormulaId::H2,
        FormulaId::Tf43,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Gg1 => "gg1",
            FormulaId::Cor1Mid => "cor1_mid",
            FormulaId::Thm1 => "thm1",
            FormulaId::Adr1 => "adr1",
            FormulaId::Adr2 => "adr2",
            FormulaId::Thm4 => "thm4",
            FormulaId::Asczeromax => "asczeromax",
            FormulaId::H1Tilde => "h1tilde",
            FormulaId::H1 => "h1",
            FormulaId::H2 => "h2",
            FormulaId::Tf43 => "tf43",
        }
    }

    /// The declared grading plan the evaluation runs under (echoed in
    /// reports).
    pub fn grading_plan(self) -> &'static str {
        match self {
            FormulaId::Gg1 => "trigraded (t, x, u); term (n, k) carries x^(n-1) u^(k-1)",
            FormulaId::Cor1Mid => "ubar-graded; term n carries ubar^(n+1); x specialized",
            FormulaId::Thm1 => {
                "u-graded with t-Laurent debt 2; term n carries u^(n-1); x, v, q specialized"
            }
            FormulaId::Adr1 => "u-graded; term n carries u^(n-1); x, v specialized (x formal in the v = 1 leg)",
            FormulaId::Adr2 => "ubar-graded; term n carries ubar^n; x, v specialized",
            FormulaId::Thm4 => {
                "ubar-graded with t-Laurent debt 2; term n carries ubar^n; x, v, z specialized"
            }
            FormulaId::Asczeromax => "u-graded; term n carries u^n; q, z specialized",
            FormulaId::H1Tilde => "t-graded via the (1-at; 1-t)_k factor; all parameters specialized",
            FormulaId::H1 => "geometric tail resummation (|rho| < 1); all parameters specialized",
            FormulaId::H2 => {
                "t-graded (five-parameter form); ubar-graded link; geometric resummation (limit form)"
            }
            FormulaId::Tf43 => "total (a, r)-graded with r-Laurent debt 1; b, c, d, e specialized",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = CheckError;
    fn from_str(s: &str) -> Result<Self, CheckError> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| CheckError::Usage(format!("unknown formula id `{s}`")))
    }
}

/// Truncation caps per formal variable family.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub t: i64,
    /// u or ubar, depending on the grading plan.
    pub u: i64,
    pub x: i64,
    /// Series variable of the two-sided transformation.
    pub r: i64,
    /// Formal slot of the two-sided transformation.
    pub a: i64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { t: 8, u: 7, x: 7, r: 8, a: 4 }
    }
}

/// Everything a verification run needs besides the formula id.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub caps: Caps,
    /// Number of pole-free specialization points per check.
    pub points: u32,
    pub seed: u64,
    /// Terminating-parameter exponent for the transformation check.
    pub j: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { caps: Caps::default(), points: 3, seed: 42, j: 1 }
    }
}

/// One exact specialization point.
pub type RationalPoint = BTreeMap<String, Coeff>;

/// Outcome of one formula verification: the report plus the points used.
#[derive(Debug, Clone)]
pub struct FormulaOutcome {
    pub id: FormulaId,
    pub points: Vec<RationalPoint>,
    pub report: CheckReport,
}

const REDRAW_LIMIT: u32 = 200;

/// Which pool a sampled variable draws from.
#[derive(Clone, Copy)]
enum Pool {
    /// Proper fractions, |value| < 1 (never 0 or 1).
    Small,
    /// Improper fractions, |value| > 1.
    Large,
}

fn witness_from_diff(a: &Series, b: &Series) -> Option<Witness> {
    a.first_difference(b).map(|(mono, ca, cb)| Witness::Series {
        monomial: a.monomial_string(&mono),
        lhs_coeff: ca.to_string(),
        rhs_coeff: cb.to_string(),
    })
}

/// Restricts both sides to the user window and reports their first
/// coefficient difference, if any.
fn compare_on(
    user_ctx: &Arc<SeriesContext>,
    lhs: &Series,
    rhs: &Series,
) -> Result<Option<Witness>, CheckError> {
    let a = lhs.restrict(user_ctx)?;
    let b = rhs.restrict(user_ctx)?;
    Ok(witness_from_diff(&a, &b))
}

/// Treats pole-style evaluation failures as a redraw signal.
fn is_pole(e: &CheckError) -> bool {
    matches!(
        e,
        CheckError::Series(
            SeriesError::Pole(_)
                | SeriesError::NotInvertible(_)
                | SeriesError::DivergentRatio(_)
        )
    )
}

/// Runs `legs` at `cfg.points` sampled points, redrawing on pole hits.
fn run_points<F>(
    id: FormulaId,
    cfg: &VerifyConfig,
    vars: &[(&str, Pool)],
    mut legs: F,
) -> Result<FormulaOutcome, CheckError>
where
    F: FnMut(&RationalPoint) -> Result<Option<Witness>, CheckError>,
{
    let start = Instant::now();
    let mut rng = Rng::new(cfg.seed);
    let mut points = Vec::new();
    let mut redraws = 0u32;
    let wanted = if vars.is_empty() { 1 } else { cfg.points.max(1) };
    while points.len() < wanted as usize {
        let mut point = RationalPoint::new();
        for &(name, pool) in vars {
            let v = match pool {
                Pool::Small => rng.small_rational(),
                Pool::Large => rng.large_rational(),
            };
            point.insert(name.to_string(), v);
        }
        match legs(&point) {
            Ok(None) => {
                if point.is_empty() {
                    break; // fully formal check: nothing to record
                }
                points.push(point);
            }
            Ok(Some(w)) => {
                return Ok(FormulaOutcome {
                    id,
                    points: vec![point],
                    report: CheckReport::fail(id.name(), w, start.elapsed()),
                });
            }
            Err(e) if is_pole(&e) => {
                redraws += 1;
                if redraws > REDRAW_LIMIT {
                    return Err(CheckError::PoleExhaustion {
                        formula: id.name().to_string(),
                        attempts: redraws,
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(FormulaOutcome {
        id,
        points,
        report: CheckReport::pass(id.name(), start.elapsed()),
    })
}

fn val(point: &RationalPoint, name: &str) -> Coeff {
    point[name].clone()
}

/// Verifies one identity under the given configuration.
pub fn verify_formula(id: FormulaId, cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    match id {
        FormulaId::Gg1 => verify_gg1(cfg),
        FormulaId::Cor1Mid => verify_cor1_mid(cfg),
        FormulaId::Thm1 => verify_thm1(cfg),
        FormulaId::Adr1 => verify_adr1(cfg),
        FormulaId::Adr2 => verify_adr2(cfg),
        FormulaId::Thm4 => verify_thm4(cfg),
        FormulaId::Asczeromax => verify_asczeromax(cfg),
        FormulaId::H1Tilde => verify_h1tilde(cfg),
        FormulaId::H1 => verify_h1(cfg),
        FormulaId::H2 => verify_h2(cfg),
        FormulaId::Tf43 => verify_tf43(cfg),
    }
}

fn verify_gg1(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let ctx = SeriesContext::new(&[("t", cfg.caps.t), ("x", cfg.caps.x), ("u", cfg.caps.u)]);
    run_points(FormulaId::Gg1, cfg, &[], |_| {
        let plan = LhsPlan::eulerian_pair(
            Domain::Permutations,
            Mode::Formal("u"),
            Mode::Formal("x"),
        );
        let left = lhs_series(&ctx, &plan, cfg.caps.t as usize)?;
        let right = closed::rhs_eulerian_pair(&ctx)?;
        compare_on(&ctx, &left, &right)
    })
}

fn verify_cor1_mid(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let ctx = SeriesContext::new(&[("t", cfg.caps.t), ("ubar", cfg.caps.u)]);
    run_points(FormulaId::Cor1Mid, cfg, &[("x", Pool::Small)], |point| {
        let x = val(point, "x");
        let mid = closed::rhs_pair_middle(&ctx, &x)?;
        let plan = LhsPlan::eulerian_pair(
            Domain::Permutations,
            Mode::Reciprocal("ubar"),
            Mode::Value(x.clone()),
        );
        let left = lhs_series(&ctx, &plan, cfg.caps.t as usize)?;
        if let Some(w) = compare_on(&ctx, &left, &mid)? {
            return Ok(Some(w));
        }
        // the double sum re-expanded at u = infinity must agree too
        let resummed = closed::rhs_eulerian_pair_reciprocal(&ctx, &x)?;
        compare_on(&ctx, &mid, &resummed)
    })
}

fn verify_thm1(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let inner = SeriesContext::build(&[("t", -2, cfg.caps.t + 2), ("u", 0, cfg.caps.u)]);
    let user = SeriesContext::build(&[("t", 0, cfg.caps.t), ("u", 0, cfg.caps.u)]);
    let vars = [("x", Pool::Small), ("v", Pool::Small), ("q", Pool::Small)];
    run_points(FormulaId::Thm1, cfg, &vars, |point| {
        let (x, v, q) = (val(point, "x"), val(point, "v"), val(point, "q"));
        let right = closed::rhs_quadruple_lmin(&inner, &x, &v, &q)?;
        let plan = LhsPlan::g_family(
            Domain::Permutations,
            [
                Mode::Formal("u"),
                Mode::Value(x.clone()),
                Mode::Value(q.clone()),
                Mode::Value(v.clone()),
                Mode::Value(int(1)),
            ],
        );
        let left = lhs_series(&inner, &plan, cfg.caps.t as usize)?;
        if let Some(w) = compare_on(&user, &left, &right)? {
            return Ok(Some(w));
        }
        // the v/q swap leaves the series invariant
        let swapped = closed::rhs_quadruple_lmin(&inner, &x, &q, &v)?;
        compare_on(&user, &right, &swapped)
    })
}

fn verify_adr1(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    // v = 1 with x kept formal collapses to the bigraded double sum:
    // triple(x, 1) = (1-u)(1-x) * pair - 1.
    let start = Instant::now();
    let tri = SeriesContext::new(&[("t", cfg.caps.t), ("x", cfg.caps.x), ("u", cfg.caps.u)]);
    let x_var = Series::var(&tri, "x")?;
    let left = closed::rhs_triple_direct(&tri, &x_var, &Coeff::one())?;
    let pair = closed::rhs_eulerian_pair(&tri)?;
    let one = Series::one(&tri);
    let right = one
        .sub(&Series::var(&tri, "u")?)?
        .mul(&one.sub(&x_var)?)?
        .mul(&pair)?
        .sub(&one)?;
    if let Some(w) = compare_on(&tri, &left, &right)? {
        return Ok(FormulaOutcome {
            id: FormulaId::Adr1,
            points: Vec::new(),
            report: CheckReport::fail(FormulaId::Adr1.name(), w, start.elapsed()),
        });
    }
    // enumeration comparison at sampled points
    let ctx = SeriesContext::new(&[("t", cfg.caps.t), ("u", cfg.caps.u)]);
    let vars = [("x", Pool::Small), ("v", Pool::Small)];
    run_points(FormulaId::Adr1, cfg, &vars, |point| {
        let (x, v) = (val(point, "x"), val(point, "v"));
        let xs = Series::constant(&ctx, x.clone());
        let right = closed::rhs_triple_direct(&ctx, &xs, &v)?;
        let plan = LhsPlan::g_family(
            Domain::Permutations,
            [
                Mode::Formal("u"),
                Mode::Value(x.clone()),
                Mode::Value(int(1)),
                Mode::Value(v.clone()),
                Mode::Value(int(1)),
            ],
        );
        let left = lhs_series(&ctx, &plan, cfg.caps.t as usize)?;
        compare_on(&ctx, &left, &right)
    })
}

fn verify_adr2(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let ctx = SeriesContext::new(&[("t", cfg.caps.t), ("ubar", cfg.caps.u)]);
    let vars = [("x", Pool::Small), ("v", Pool::Small)];
    run_points(FormulaId::Adr2, cfg, &vars, |point| {
        let (x, v) = (val(point, "x"), val(point, "v"));
        let xs = Series::constant(&ctx, x.clone());
        let right = closed::rhs_triple_reciprocal(&ctx, &xs, &v)?;
        let plan = LhsPlan::g_family(
            Domain::Permutations,
            [
                Mode::Reciprocal("ubar"),
                Mode::Value(x.clone()),
                Mode::Value(int(1)),
                Mode::Value(v.clone()),
                Mode::Value(int(1)),
            ],
        );
        let left = lhs_series(&ctx, &plan, cfg.caps.t as usize)?;
        compare_on(&ctx, &left, &right)
    })
}

fn verify_thm4(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let inner = SeriesContext::build(&[("t", -2, cfg.caps.t + 2), ("ubar", 0, cfg.caps.u)]);
    let user = SeriesContext::build(&[("t", 0, cfg.caps.t), ("ubar", 0, cfg.caps.u)]);
    let vars = [("x", Pool::Small), ("v", Pool::Small), ("z", Pool::Small)];
    run_points(FormulaId::Thm4, cfg, &vars, |point| {
        let (x, v, z) = (val(point, "x"), val(point, "v"), val(point, "z"));
        let right = closed::rhs_quadruple_lmax(&inner, &x, &v, &z)?;
        let plan = LhsPlan::g_family(
            Domain::Permutations,
            [
                Mode::Reciprocal("ubar"),
                Mode::Value(x.clone()),
                Mode::Value(int(1)),
                Mode::Value(v.clone()),
                Mode::Value(z.clone()),
            ],
        );
        let left = lhs_series(&inner, &plan, cfg.caps.t as usize)?;
        if let Some(w) = compare_on(&user, &left, &right)? {
            return Ok(Some(w));
        }
        // z = 1 collapses to the reciprocal triple form exactly
        let collapsed = closed::rhs_quadruple_lmax(&inner, &x, &v, &Coeff::one())?;
        let triple = closed::rhs_triple_reciprocal(
            &inner,
            &Series::constant(&inner, x.clone()),
            &v,
        )?;
        compare_on(&user, &collapsed, &triple)
    })
}

fn verify_asczeromax(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let ctx = SeriesContext::new(&[("t", cfg.caps.t), ("u", cfg.caps.u)]);
    let vars = [("q", Pool::Small), ("z", Pool::Small)];
    run_points(FormulaId::Asczeromax, cfg, &vars, |point| {
        let (q, z) = (val(point, "q"), val(point, "z"));
        let right = closed::rhs_des_lmax_lmin(&ctx, &q, &z)?;
        let plan = LhsPlan::u_only(
            Domain::Permutations,
            Mode::Formal("u"),
            Mode::Value(q.clone()),
            Mode::Value(z.clone()),
        );
        let left = lhs_series(&ctx, &plan, cfg.caps.t as usize)?;
        compare_on(&ctx, &left, &right)
    })
}

fn verify_h1tilde(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let ctx = SeriesContext::new(&[("t", cfg.caps.t)]);
    let vars = [
        ("x", Pool::Small),
        ("u", Pool::Small),
        ("v", Pool::Small),
        ("q", Pool::Small),
        ("a", Pool::Small),
    ];
    run_points(FormulaId::H1Tilde, cfg, &vars, |point| {
        let (x, u, v, q, a) = (
            val(point, "x"),
            val(point, "u"),
            val(point, "v"),
            val(point, "q"),
            val(point, "a"),
        );
        let base = closed::h_series_tilde(&ctx, &x, &u, &v, &q, &a)?;
        for swapped in [
            closed::h_series_tilde(&ctx, &u, &x, &v, &q, &a)?,
            closed::h_series_tilde(&ctx, &x, &u, &q, &v, &a)?,
            closed::h_series_tilde(&ctx, &u, &x, &q, &v, &a)?,
        ] {
            if let Some(w) = compare_on(&ctx, &base, &swapped)? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    })
}

fn verify_h1(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let ctx = SeriesContext::new(&[("t", cfg.caps.t)]);
    let vars = [
        ("x", Pool::Small),
        ("u", Pool::Small),
        ("v", Pool::Small),
        ("q", Pool::Small),
    ];
    run_points(FormulaId::H1, cfg, &vars, |point| {
        let (x, u, v, q) = (
            val(point, "x"),
            val(point, "u"),
            val(point, "v"),
            val(point, "q"),
        );
        let base = closed::h_series_plain(&ctx, &x, &u, &v, &q)?;
        for swapped in [
            closed::h_series_plain(&ctx, &u, &x, &v, &q)?,
            closed::h_series_plain(&ctx, &x, &u, &q, &v)?,
            closed::h_series_plain(&ctx, &u, &x, &q, &v)?,
        ] {
            if let Some(w) = compare_on(&ctx, &base, &swapped)? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    })
}

fn verify_h2(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let tctx = SeriesContext::new(&[("t", cfg.caps.t)]);
    let uctx = SeriesContext::new(&[("t", cfg.caps.t), ("ubar", cfg.caps.u)]);
    let vars = [
        ("x", Pool::Small),
        ("u", Pool::Small),
        ("v", Pool::Small),
        ("q", Pool::Small),
        ("a", Pool::Small),
        ("xl", Pool::Large),
        ("ul", Pool::Large),
    ];
    run_points(FormulaId::H2, cfg, &vars, |point| {
        let (x, u, v, q, a) = (
            val(point, "x"),
            val(point, "u"),
            val(point, "v"),
            val(point, "q"),
            val(point, "a"),
        );
        // five-parameter x <-> u symmetry
        let base = closed::h_series_second(&tctx, &x, &u, &q, &v, &a)?;
        let swapped = closed::h_series_second(&tctx, &u, &x, &q, &v, &a)?;
        if let Some(w) = compare_on(&tctx, &base, &swapped)? {
            return Ok(Some(w));
        }
        // limit form: triple(x, v) = v t ubar / (x (1-vt)) * limit(x, v)
        let triple = closed::rhs_triple_reciprocal(
            &uctx,
            &Series::constant(&uctx, x.clone()),
            &v,
        )?;
        let limit = closed::h_series_limit_formal(&uctx, &x, &v)?;
        let one = Series::one(&uctx);
        let t = Series::var(&uctx, "t")?;
        let vt = one.sub(&t.scale(&v))?;
        let link = t
            .scale(&(v.clone() / x.clone()))
            .mul(&Series::var(&uctx, "ubar")?)?
            .mul(&vt.invert()?)?
            .mul(&limit)?;
        if let Some(w) = compare_on(&uctx, &triple, &link)? {
            return Ok(Some(w));
        }
        // limit-form x <-> u symmetry at |x|, |u| > 1
        let (xl, ul) = (val(point, "xl"), val(point, "ul"));
        let lhs = closed::h_series_limit_specialized(&tctx, &xl, &ul, &v)?;
        let rhs = closed::h_series_limit_specialized(&tctx, &ul, &xl, &v)?;
        compare_on(&tctx, &lhs, &rhs)
    })
}

fn verify_tf43(cfg: &VerifyConfig) -> Result<FormulaOutcome, CheckError> {
    let inner = SeriesContext::build(&[("r", -1, cfg.caps.r + 2), ("a", 0, cfg.caps.a)]);
    let user = SeriesContext::build(&[("r", 0, cfg.caps.r), ("a", 0, cfg.caps.a)]);
    let vars = [
        ("b", Pool::Small),
        ("c", Pool::Small),
        ("d", Pool::Small),
        ("e", Pool::Small),
    ];
    let j = cfg.j;
    run_points(FormulaId::Tf43, cfg, &vars, |point| {
        let (b, c, d, e) = (
            val(point, "b"),
            val(point, "c"),
            val(point, "d"),
            val(point, "e"),
        );
        if b.clone() * c.clone() == d.clone() * e.clone() {
            return Err(CheckError::Series(SeriesError::Pole("bc = de".into())));
        }
        let (left, right) = closed::transformation_sides(&inner, j, &b, &c, &d, &e)?;
        compare_on(&user, &left, &right)
    })
}

/// Convenience wrapper verifying the double sum re-expanded at infinity by
/// itself (used by tests).
pub fn pair_reciprocal_consistency(
    tcap: i64,
    ucap: i64,
    x: &Coeff,
) -> Result<Option<Witness>, CheckError> {
    let ctx = SeriesContext::new(&[("t", tcap), ("ubar", ucap)]);
    let mid = closed::rhs_pair_middle(&ctx, x)?;
    let resummed = closed::rhs_eulerian_pair_reciprocal(&ctx, x)?;
    compare_on(&ctx, &mid, &resummed)
}
