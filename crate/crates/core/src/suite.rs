//! The reproduction suite: ten checks against known values, each with a
//! runtime budget.

use std::collections::HashMap;
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog;
use crate::cech::{
    detect_repetition, extension_splits, fixed_classes, flat_class, frobenius_iterate,
    frobenius_on_class, h1_basis, hasse_witt, orbit, CechClass,
};
use crate::curve::{CurveFile, PlaneCurve, Smoothness};
use crate::descent::{
    bundle_count_bound, count_constant, pigeonhole_window, theorem_margin, BoundContext,
    DescentSequence,
};
use crate::gf::{Elem, Field};
use crate::hk::{ehk_estimate, hk_function, syzygy_dim, IdealGens, Syzygy};
use crate::hn::{
    ehk_from_hn, semistable_rank2, strong_hn_scan, verify_destabilizer, SyzBundle, Verdict,
};
use crate::linalg::{self, Matrix};
use crate::parse::parse_poly;
use crate::poly::HomogPoly;

/// Curve files by stem; bundled copies unless overridden from a directory.
#[derive(Debug, Clone)]
pub struct Catalog {
    files: HashMap<String, String>,
}

impl Catalog {
    pub fn bundled() -> Self {
        Catalog {
            files: catalog::ALL
                .iter()
                .map(|(n, t)| (n.to_string(), t.to_string()))
                .collect(),
        }
    }

    /// Bundled curves, replaced by `<stem>.curve` files found in `dir`.
    pub fn with_overrides(dir: &Path) -> std::io::Result<Self> {
        let mut cat = Catalog::bundled();
        for (name, _) in catalog::ALL {
            let path = dir.join(format!("{name}.curve"));
            if path.exists() {
                cat.files
                    .insert(name.to_string(), std::fs::read_to_string(path)?);
            }
        }
        Ok(cat)
    }

    pub fn text(&self, name: &str) -> &str {
        &self.files[name]
    }

    pub fn curve(&self, name: &str) -> Result<PlaneCurve, String> {
        CurveFile::parse(self.text(name))
            .and_then(|f| f.build())
            .map_err(|e| format!("{name}: {e}"))
    }

    /// The curve, required to pass the smoothness probe.
    pub fn smooth_curve(&self, name: &str) -> Result<PlaneCurve, String> {
        let c = self.curve(name)?;
        match c.is_smooth_probe() {
            Smoothness::Smooth => Ok(c),
            Smoothness::Singular(pt) => Err(format!(
                "{name} is singular at ({}:{}:{})",
                pt[0], pt[1], pt[2]
            )),
            Smoothness::Inconclusive => Err(format!("{name}: smoothness inconclusive")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub within_budget: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub budget: Duration,
}

impl CriterionReport {
    /// One deterministic report line.
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2}: {} {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }

    /// [`line`](Self::line) with the elapsed time against the budget.
    pub fn timed_line(&self) -> String {
        format!(
            "{} ({:.2?} of {:?})",
            self.line(),
            self.elapsed,
            self.budget
        )
    }
}

type Check = Result<(bool, String), String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn(&Catalog) -> Check,
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "Hilbert-Kunz value phi(9) = 252 in characteristic 3",
        budget: Duration::from_secs(5),
        run: criterion_1,
    },
    Criterion {
        id: 2,
        title: "Hilbert function 1, 3, 6, 10, 14, ... of smooth quartics",
        budget: Duration::from_secs(60),
        run: criterion_2,
    },
    Criterion {
        id: 3,
        title: "HN certificate in characteristic 2",
        budget: Duration::from_secs(30),
        run: criterion_3,
    },
    Criterion {
        id: 4,
        title: "e_HK cross-check 49/16",
        budget: Duration::from_secs(60),
        run: criterion_4,
    },
    Criterion {
        id: 5,
        title: "HN certificate in characteristic 3 and splitting",
        budget: Duration::from_secs(30),
        run: criterion_5,
    },
    Criterion {
        id: 6,
        title: "Frobenius-fixed classes, flat orbit and p-rank",
        budget: Duration::from_secs(10),
        run: criterion_6,
    },
    Criterion {
        id: 7,
        title: "descent instance on the Fermat quintic",
        budget: Duration::from_secs(60),
        run: criterion_7,
    },
    Criterion {
        id: 8,
        title: "octic cover and splitting",
        budget: Duration::from_secs(120),
        run: criterion_8,
    },
    Criterion {
        id: 9,
        title: "bound arithmetic",
        budget: Duration::from_secs(5),
        run: criterion_9,
    },
    Criterion {
        id: 10,
        title: "property suites",
        budget: Duration::from_secs(300),
        run: criterion_10,
    },
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(cat: &Catalog, id: u32) -> CriterionReport {
    let c = &CRITERIA[(id - 1) as usize];
    let start = Instant::now();
    let result = (c.run)(cat);
    let elapsed = start.elapsed();
    let within_budget = elapsed <= c.budget;
    let (ok, mut detail) = match result {
        Ok((ok, d)) => (ok, d),
        Err(e) => (false, format!("error: {e}")),
    };
    if !within_budget {
        detail.push_str(" [over budget]");
    }
    CriterionReport {
        id: c.id,
        title: c.title.to_string(),
        passed: ok && within_budget,
        within_budget,
        detail,
        elapsed,
        budget: c.budget,
    }
}

pub fn run_all(cat: &Catalog) -> Vec<CriterionReport> {
    (1..=CRITERIA.len() as u32)
        .map(|id| run_criterion(cat, id))
        .collect()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1(cat: &Catalog) -> Check {
    let h = cat.smooth_curve("h_char3")?;
    let table = hk_function(&h, &IdealGens::maximal(h.field()), 2).map_err(err)?;
    let phi9 = table.phi(9);
    let identity = table.rows.iter().all(|r| r.identity_checked);
    Ok((
        phi9 == Some(252) && identity,
        format!("phi(9) = {phi9:?}, alternating-sum identity {identity}"),
    ))
}

/// `HF = 1, 3, 4m - 2` for a plane quartic.
fn quartic_hf(m: i32) -> i64 {
    match m {
        0 => 1,
        1 => 3,
        _ => 4 * m as i64 - 2,
    }
}

pub const QUARTICS: [&str; 5] = [
    "g_char2",
    "g_char2_f4",
    "h_char3",
    "fermat4_f5",
    "fermat4_f625",
];

fn criterion_2(cat: &Catalog) -> Check {
    let mut bad = Vec::new();
    for name in QUARTICS {
        let c = cat.smooth_curve(name)?;
        for m in 0..=30 {
            if c.graded_piece(m).dim() as i64 != quartic_hf(m)
                || c.hilbert_function(m) != quartic_hf(m)
            {
                bad.push(format!("{name} m={m}"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} quartics, m = 0..30", QUARTICS.len())
        } else {
            format!("mismatches: {}", bad.join(", "))
        },
    ))
}

fn criterion_3(cat: &Catalog) -> Check {
    let g = cat.smooth_curve("g_char2")?;
    let gens = IdealGens::parse(g.field(), "X^2,Y^2,Z^2").map_err(err)?;
    let scan = strong_hn_scan(&g, &gens, Some(3), 2).map_err(err)?;
    let mut parts = Vec::new();
    for entry in &scan.entries {
        let d = &entry.data;
        let mut s = format!(
            "e={} Syz(q={})({}): {:?}",
            entry.e, entry.q, entry.twist, d.verdict
        );
        if let Some(x) = &d.destabilizer {
            s.push_str(&format!(" sub deg {} alpha {}", x.sub_degree, x.alpha));
        }
        parts.push(s);
    }
    let e = &scan.entries;
    let ok0 = e[0].data.verdict == Verdict::Semistable;
    let ok1 = e[1].data.verdict == Verdict::Semistable;
    let ok2 = e[2].data.verdict == Verdict::Destabilized
        && e[2].data.destabilizer.as_ref().is_some_and(|x| {
            x.sub_degree == 4 && x.alpha == Ratio::from_integer(4) && x.vanishing_degree == 0
        });
    Ok((ok0 && ok1 && ok2, parts.join("; ")))
}

fn criterion_4(cat: &Catalog) -> Check {
    let g = cat.smooth_curve("g_char2")?;
    let from_hn = ehk_from_hn(4, Ratio::from_integer(4), 8).map_err(err)?;
    let table = hk_function(&g, &IdealGens::maximal(g.field()), 5).map_err(err)?;
    let est = ehk_estimate(&table).map_err(err)?;
    let target = Ratio::new(49, 16);
    Ok((
        from_hn == target
            && est.value == Ratio::new(49i128, 16)
            && table.rows.iter().all(|r| r.identity_checked),
        format!("from HN {from_hn}, from phi table {}", est.value),
    ))
}

fn criterion_5(cat: &Catalog) -> Check {
    let h = cat.smooth_curve("h_char3")?;
    let gens = IdealGens::parse(h.field(), "X^9,Y^9,Z^9").map_err(err)?;
    let bundle = SyzBundle::new(&h, &gens, 12).map_err(err)?;
    let hn = semistable_rank2(&bundle).map_err(err)?;
    let Some(d) = &hn.destabilizer else {
        return Ok((false, format!("verdict {:?}", hn.verdict)));
    };
    let ok = hn.verdict == Verdict::Destabilized
        && d.sub_degree == 0
        && d.quotient_degree == -12
        && d.alpha == Ratio::from_integer(6)
        && d.vanishing_degree == 0
        && verify_destabilizer(&bundle, d);
    let splits = extension_splits(&h, 3) && h.h1(3) == 0;
    Ok((
        ok && splits,
        format!(
            "sub {} quotient {} alpha {} zeros {}, h1(O(3)) = {}",
            d.sub_degree,
            d.quotient_degree,
            d.alpha,
            d.vanishing_degree,
            h.h1(3)
        ),
    ))
}

/// Rank of the span of `F^{g*}` applied to each basis class of `H^1(O_C)`.
pub fn stable_rank_oracle(curve: &PlaneCurve) -> usize {
    let basis = h1_basis(curve, 0);
    let g = basis.len();
    if g == 0 {
        return 0;
    }
    let rows: Vec<Vec<Elem>> = basis
        .iter()
        .map(|b| {
            let class =
                CechClass::from_cochain(curve, &HomogPoly::monomial(curve.field(), *b, Elem::ONE))
                    .expect("same field");
            frobenius_iterate(&class, g as u32).coordinates()
        })
        .collect();
    linalg::rank(curve.field(), &Matrix::from_rows(rows, g))
}

fn criterion_6(cat: &Catalog) -> Check {
    let c = cat.smooth_curve("fermat4_f625")?;
    let v = CechClass::<Field>::parse(&c, "a*Z^3/(X^2*Y)").map_err(err)?;
    let w = CechClass::<Field>::parse(&c, "a*Z^3/(X*Y^2)").map_err(err)?;
    let fixed = frobenius_on_class(&v) == v && frobenius_on_class(&w) == w;
    let flat = flat_class(&v, &w).map_err(err)?;
    let orb = orbit(&flat, 6);
    let distinct = detect_repetition(&orb).is_none();
    let hw = hasse_witt(&c);
    let oracle = stable_rank_oracle(&c);
    let fp = fixed_classes(&c);
    let contains = [&v, &w].iter().all(|x| {
        let mut rows: Vec<Vec<Elem>> = fp.classes.iter().map(|k| k.coordinates()).collect();
        let before = linalg::rank(c.field(), &Matrix::from_rows(rows.clone(), 3));
        rows.push(x.coordinates());
        before == linalg::rank(c.field(), &Matrix::from_rows(rows, 3))
    });
    Ok((
        fixed && distinct && hw.p_rank >= 2 && hw.p_rank == oracle && contains,
        format!(
            "classes fixed {fixed}, orbit e<=6 distinct {distinct}, p-rank {} (oracle {oracle}), fixed F_p-dim {}",
            hw.p_rank, fp.fp_dimension
        ),
    ))
}

fn criterion_7(cat: &Catalog) -> Check {
    let c = cat.smooth_curve("fermat5_f7")?;
    let p = c.field().characteristic();
    let gens = IdealGens::parse(c.field(), "X^14,Y^14,Z^14").map_err(err)?;
    let h0 = syzygy_dim(&c, &gens, 20);
    let h1 = c.h1(2);
    Ok((
        c.degree() == 5 && p % 5 == 2 && h1 == 1 && h0 >= 1,
        format!("h1(O(2)) = {h1}, h0(Syz(X^14,Y^14,Z^14)(20)) = {h0}"),
    ))
}

fn criterion_8(cat: &Catalog) -> Check {
    let h = cat.smooth_curve("h_char3")?;
    let d = cat.smooth_curve("octic_d_char3")?;
    let f = h.field().clone();
    let p = |s: &str| parse_poly(&f, s).map_err(err);
    let images = [p("X^4")?, p("Y^4")?, p("X*Y*Z^2")?];
    let pulled = h.equation().substitute(&images).map_err(err)?;
    let relation = pulled == d.equation().mul(&p("X^4*Y^4")?);

    let gens_h = IdealGens::parse(&f, "X^9,Y^9,Z^9").map_err(err)?;
    let gens_d = IdealGens::new(
        gens_h
            .gens()
            .iter()
            .map(|g| g.substitute(&images))
            .collect::<Result<_, _>>()
            .map_err(err)?,
    )
    .map_err(err)?;
    let h0 = syzygy_dim(&d, &gens_d, 48);

    // the degree-0 HN section on H pulls back to a section on D
    let hn = semistable_rank2(&SyzBundle::new(&h, &gens_h, 12).map_err(err)?).map_err(err)?;
    let section_ok = hn.destabilizer.as_ref().is_some_and(|x| {
        let s = Syzygy {
            m: 48,
            components: x
                .section
                .components
                .iter()
                .map(|a| a.substitute(&images).expect("uniform images"))
                .collect(),
        };
        !s.is_zero() && s.verify(&d, &gens_d)
    });
    let h1 = d.h1(12);
    Ok((
        relation && h0 >= 1 && h1 == 0 && extension_splits(&d, 12) && section_ok,
        format!(
            "H(U^4,V^4,UVW^2) = U^4V^4*D: {relation}; h0(Syz(U^36,V^36,U^9V^9W^18)(48)) = {h0}; \
             pulled-back section is a syzygy: {section_ok}; h1(O_D(12)) = {h1}"
        ),
    ))
}

fn criterion_9(_cat: &Catalog) -> Check {
    let cc = count_constant(2, 3).map_err(err)?;
    let tuple_ok = cc.as_tuple() == (6, 8, 54, 264, 46, BigInt::from(97152));
    let (r, g) = (cc.r, cc.g);
    let eqs = cc.s == r * cc.ell + r * (1 - g)
        && cc.k == cc.ell * (cc.s + 1)
        && cc.m == -cc.ell * cc.s + (cc.s - r) * cc.k + (cc.s - r) * (1 - g)
        && cc.n == cc.ell * cc.s + 1 - g
        && cc.c == BigInt::from(cc.n * cc.m * cc.s);

    let ctx = BoundContext::new(2, 3, 0, 3, 4).map_err(err)?;
    // n <= p^{c a_n}: every margin is nonpositive
    let shape = DescentSequence::from_small(&(1..=8).map(|n| (2u64, n)).collect::<Vec<_>>())
        .map_err(err)?;
    let rep = theorem_margin(&shape, &cc.c, &ctx.threshold);
    let shape_ok = rep.trigger.is_none() && rep.margins.iter().all(|m| *m <= BigInt::from(0));

    // a constant point with e_n = 2^c + n
    let base = BigUint::from(2u32).pow(97152);
    let mut constant = DescentSequence::default();
    for n in 0..10u32 {
        constant.push(2, &base + BigUint::from(n)).map_err(err)?;
    }
    let rep = theorem_margin(&constant, &cc.c, &ctx.threshold);
    let trigger_ok = rep.trigger == Some(ctx.threshold.ceil as usize)
        && rep.margins[ctx.threshold.ceil as usize] >= BigInt::from(ctx.threshold.ceil);

    let bound = bundle_count_bound(2, &cc.c).map_err(err)?;
    let window = pigeonhole_window(&BigInt::from(10), &BigInt::from(5), &BigUint::from(4u32));
    Ok((
        tuple_ok && eqs && shape_ok && trigger_ok && bound.bits == 97153 && window.forced,
        format!(
            "(l,s,k,m,n,c) = ({},{},{},{},{},{}); b = {}, t = log2({}) in [{}, {}]; \
             example shape untriggered {shape_ok}; constant point triggers at n = {:?}",
            cc.ell,
            cc.s,
            cc.k,
            cc.m,
            cc.n,
            cc.c,
            ctx.b,
            ctx.threshold.argument,
            ctx.threshold.floor,
            ctx.threshold.ceil,
            rep.trigger
        ),
    ))
}

pub const SUITE_CURVES: [&str; 7] = [
    "g_char2",
    "g_char2_f4",
    "h_char3",
    "fermat4_f5",
    "fermat4_f625",
    "fermat5_f7",
    "octic_d_char3",
];

fn criterion_10(cat: &Catalog) -> Check {
    let curves: Vec<PlaneCurve> = SUITE_CURVES
        .iter()
        .map(|n| cat.smooth_curve(n))
        .collect::<Result<_, _>>()?;
    let mut failures = Vec::new();

    // Serre duality and Riemann-Roch
    for (name, c) in SUITE_CURVES.iter().zip(&curves) {
        let delta = c.degree();
        for m in -10..=delta {
            if h1_basis(c, m).len() as i64 != c.h0(delta - 3 - m) {
                failures.push(format!("serre {name} m={m}"));
            }
        }
        for m in -5..=30 {
            if c.h0(m) - c.h1(m) != delta as i64 * m as i64 + 1 - c.genus() {
                failures.push(format!("riemann-roch {name} m={m}"));
            }
        }
    }

    // alternating-sum identity in every degree of these runs
    let runs: [(&str, u32); 4] = [
        ("h_char3", 2),
        ("g_char2", 3),
        ("fermat4_f5", 2),
        ("fermat5_f7", 1),
    ];
    for (name, e) in runs {
        let c = cat.curve(name)?;
        let t = hk_function(&c, &IdealGens::maximal(c.field()), e).map_err(err)?;
        if !t.rows.iter().all(|r| r.identity_checked) {
            failures.push(format!("alternating sum {name}"));
        }
    }

    // p-linearity F(λc) = λ^p F(c), F(c + c') = F(c) + F(c')
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let c = &curves[rng.gen_range(0..curves.len())];
        let field = c.field();
        let m = rng.gen_range(-6..=1);
        let n = h1_basis(c, m).len();
        if n == 0 {
            continue;
        }
        let random_class = |rng: &mut ChaCha8Rng| {
            let coords: Vec<Elem> = (0..n)
                .map(|_| Elem(rng.gen_range(0..field.size())))
                .collect();
            CechClass::from_coordinates(c, m, &coords)
        };
        let x = random_class(&mut rng);
        let y = random_class(&mut rng);
        let lambda = Elem(rng.gen_range(0..field.size()));
        let lhs = frobenius_on_class(&x.scale(&lambda));
        let rhs = frobenius_on_class(&x).scale(&field.frobenius(lambda, 1));
        let sum = frobenius_on_class(&x.add(&y).map_err(err)?);
        let sum2 = frobenius_on_class(&x)
            .add(&frobenius_on_class(&y))
            .map_err(err)?;
        if lhs != rhs || sum != sum2 {
            failures.push(format!("p-linearity trial {trial}"));
        }
    }

    // base-field extension: G over F_2 and over F_4
    let g2 = cat.curve("g_char2")?;
    let g4 = cat.curve("g_char2_f4")?;
    let t2 = hk_function(&g2, &IdealGens::maximal(g2.field()), 3).map_err(err)?;
    let t4 = hk_function(&g4, &IdealGens::maximal(g4.field()), 3).map_err(err)?;
    let phis = |t: &crate::hk::HKTable| t.rows.iter().map(|r| r.phi).collect::<Vec<_>>();
    if phis(&t2) != phis(&t4) {
        failures.push("phi under field extension".into());
    }
    let verdicts = |c: &PlaneCurve| -> Result<Vec<(Verdict, Option<Ratio<i64>>)>, String> {
        let gens = IdealGens::parse(c.field(), "X^2,Y^2,Z^2").map_err(err)?;
        let scan = strong_hn_scan(c, &gens, Some(3), 2).map_err(err)?;
        Ok(scan
            .entries
            .iter()
            .map(|e| (e.data.verdict, e.data.alpha()))
            .collect())
    };
    if verdicts(&g2)? != verdicts(&g4)? {
        failures.push("HN verdicts under field extension".into());
    }
    let f5 = cat.curve("fermat4_f5")?;
    let f625 = cat.curve("fermat4_f625")?;
    if hasse_witt(&f5).p_rank != hasse_witt(&f625).p_rank {
        failures.push("p-rank under field extension".into());
    }

    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} curves; 1000 Frobenius trials; phi and HN verdicts agree over F_2 and F_4",
                curves.len()
            )
        } else {
            format!("failures: {}", failures.join(", "))
        },
    ))
}
