//! Exhaustive verification of the structural results: each theorem is
//! replayed over its full instance universe for every `n` up to a bound,
//! and any violation is returned as a replayable counterexample.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::construct::{build, degree_sequence_shape};
use crate::enumerate::{
    all_projection_choices, full_table, full_universe_size, quasitrivial_table,
    quasitrivial_universe_size, BruteForceLimits, EnumerateError,
};
use crate::optable::OpTable;
use crate::order::{enumerate_weak_orders, LinearOrder, WeakOrder, WeakOrderFilter};

/// The verifiable statements. Identifiers follow the `verify` command's
/// vocabulary, e.g. `THM_B` or `BS_QUASILINEAR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// Quasitrivial and bisymmetric tables are associative.
    BisImpliesAssoc,
    /// Commutative quasitrivial: associative iff bisymmetric; with a
    /// neutral element (any table): bisymmetric iff associative and
    /// commutative.
    EquivComm,
    /// Quasitrivial: order-preserving iff no general disconnected level
    /// set, and the general flag iff a horizontal or vertical one.
    LevelSet,
    /// Quasitrivial: `a` is an annihilator iff its degree is `2(n-1)`.
    AnnihilatorDeg,
    /// Quasitrivial: `e` is neutral iff `(e,e)` shares its value with no
    /// other point.
    NeutralIsolated,
    /// Quasitrivial, order-preserving, all degrees `n-1`: exactly the two
    /// projections.
    ProjShape,
    /// Bisymmetric+quasitrivial ⇔ built from a quasilinear weak order ⇔
    /// associative+quasitrivial with the characteristic degree shape.
    ThmB,
    /// The order-preserving refinement of `ThmB`, with weak
    /// single-peakedness and no associativity test on the shape side.
    ThmBnd,
    /// A built table is bisymmetric iff its weak order is quasilinear.
    BsQuasilinear,
    /// A built table's weak order is quasilinear iff the table preserves
    /// every subordinated linear order.
    SubordPreserving,
    /// Quasitrivial: bisymmetric iff autodistributive.
    Autodist,
    /// The profile-pattern characterizations of weak single-peakedness and
    /// quasilinearity.
    WspGraph,
    /// Weak single-peakedness always yields a single-peaked subordinated
    /// linear order, and is equivalent to one existing under
    /// quasilinearity.
    SubordSp,
    /// Structure of minimal/maximal blocks of quasilinear weak orders,
    /// with and without weak single-peakedness.
    MaxStructure,
}

impl TheoremId {
    pub fn all() -> [TheoremId; 14] {
        use TheoremId::*;
        [
            BisImpliesAssoc,
            EquivComm,
            LevelSet,
            AnnihilatorDeg,
            NeutralIsolated,
            ProjShape,
            ThmB,
            ThmBnd,
            BsQuasilinear,
            SubordPreserving,
            Autodist,
            WspGraph,
            SubordSp,
            MaxStructure,
        ]
    }

    fn name(self) -> &'static str {
        use TheoremId::*;
        match self {
            BisImpliesAssoc => "BIS_IMPLIES_ASSOC",
            EquivComm => "EQUIV_COMM",
            LevelSet => "LEVELSET",
            AnnihilatorDeg => "ANNIHILATOR_DEG",
            NeutralIsolated => "NEUTRAL_ISOLATED",
            ProjShape => "PROJ_SHAPE",
            ThmB => "THM_B",
            ThmBnd => "THM_BND",
            BsQuasilinear => "BS_QUASILINEAR",
            SubordPreserving => "SUBORD_PRESERVING",
            Autodist => "AUTODIST",
            WspGraph => "WSP_GRAPH",
            SubordSp => "SUBORD_SP",
            MaxStructure => "MAX_STRUCTURE",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = EnumerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::all()
            .into_iter()
            .find(|t| t.name() == s.trim())
            .ok_or_else(|| EnumerateError::UnknownTheorem(s.to_string()))
    }
}

/// A violated instance, with enough text artifacts to replay it.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub n: usize,
    pub detail: String,
    /// Replayable payloads keyed by kind (`op_table`, `weak_order`,
    /// `base`, `choice`, …).
    pub artifacts: BTreeMap<String, String>,
}

/// Outcome of an exhaustive verification run over `n = 1..=max_n`.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub min_n: usize,
    pub max_n: usize,
    /// Universe objects examined (tables, `(w, c)` pairs, or `(w, base)`
    /// pairs depending on the theorem).
    pub instances: u64,
    pub counterexamples: Vec<Counterexample>,
    pub wall_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

struct Run {
    instances: u64,
    counterexamples: Vec<Counterexample>,
}

impl Run {
    fn new() -> Self {
        Self { instances: 0, counterexamples: Vec::new() }
    }

    fn fail(&mut self, n: usize, detail: String, artifacts: &[(&str, String)]) {
        self.counterexamples.push(Counterexample {
            n,
            detail,
            artifacts: artifacts
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        });
    }
}

/// Bases used for the statements quantified over a linear order: every
/// permutation while that is cheap, the natural order beyond.
fn bases_for(n: usize) -> Vec<LinearOrder> {
    if n <= 4 {
        LinearOrder::all(n).collect()
    } else {
        vec![LinearOrder::natural(n)]
    }
}

fn quasitrivial_tables(n: usize) -> impl Iterator<Item = OpTable> {
    (0..quasitrivial_universe_size(n)).map(move |mask| quasitrivial_table(n, mask))
}

fn weak_orders(n: usize) -> impl Iterator<Item = WeakOrder> {
    enumerate_weak_orders(n, WeakOrderFilter::All).expect("n >= 1")
}

/// Runs the exhaustive check of `theorem` over every `n` in `1..=max_n`.
/// Fails with [`EnumerateError::OutOfBounds`] when `max_n` exceeds the
/// limit of the theorem's instance universe.
pub fn verify(
    theorem: TheoremId,
    max_n: usize,
    limits: &BruteForceLimits,
) -> Result<VerificationReport, EnumerateError> {
    use TheoremId::*;

    if max_n == 0 {
        return Err(EnumerateError::ZeroSize);
    }
    let (what, limit) = match theorem {
        EquivComm => ("full-table", limits.full_table_max),
        BisImpliesAssoc | LevelSet | AnnihilatorDeg | NeutralIsolated | ProjShape | ThmB
        | ThmBnd | Autodist => ("quasitrivial-table", limits.quasitrivial_table_max),
        BsQuasilinear | SubordPreserving | WspGraph | SubordSp | MaxStructure => {
            ("weak-order", limits.weak_order_max)
        }
    };
    if max_n > limit {
        return Err(EnumerateError::OutOfBounds { what, n: max_n, limit });
    }

    let start = Instant::now();
    let mut run = Run::new();
    for n in 1..=max_n {
        match theorem {
            BisImpliesAssoc => bis_implies_assoc(&mut run, n),
            EquivComm => equiv_comm(&mut run, n),
            LevelSet => level_set(&mut run, n),
            AnnihilatorDeg => annihilator_deg(&mut run, n),
            NeutralIsolated => neutral_isolated(&mut run, n),
            ProjShape => proj_shape(&mut run, n),
            ThmB => thm_b(&mut run, n),
            ThmBnd => thm_bnd(&mut run, n),
            BsQuasilinear => bs_quasilinear(&mut run, n),
            SubordPreserving => subord_preserving(&mut run, n),
            Autodist => autodist(&mut run, n),
            WspGraph => wsp_graph(&mut run, n),
            SubordSp => subord_sp(&mut run, n),
            MaxStructure => max_structure(&mut run, n),
        }
    }
    Ok(VerificationReport {
        theorem: theorem.to_string(),
        min_n: 1,
        max_n,
        instances: run.instances,
        counterexamples: run.counterexamples,
        wall_ms: start.elapsed().as_millis(),
    })
}

fn bis_implies_assoc(run: &mut Run, n: usize) {
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        if t.is_bisymmetric() && !t.is_associative() {
            run.fail(n, "bisymmetric but not associative".into(), &[("op_table", t.to_string())]);
        }
    }
}

fn equiv_comm(run: &mut Run, n: usize) {
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        if t.is_commutative() && t.is_associative() != t.is_bisymmetric() {
            run.fail(
                n,
                "commutative quasitrivial: associativity and bisymmetry disagree".into(),
                &[("op_table", t.to_string())],
            );
        }
    }
    for code in 0..full_universe_size(n) {
        let t = full_table(n, code);
        run.instances += 1;
        if t.neutral_element().is_some()
            && t.is_bisymmetric() != (t.is_associative() && t.is_commutative())
        {
            run.fail(
                n,
                "neutral element present: bisymmetry and associative+commutative disagree".into(),
                &[("op_table", t.to_string())],
            );
        }
    }
}

fn level_set(run: &mut Run, n: usize) {
    let base = LinearOrder::natural(n);
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        let report = t.level_set_report(&base);
        if t.is_order_preserving(&base) != !report.general {
            run.fail(
                n,
                "order-preservation and level-set connectedness disagree".into(),
                &[("op_table", t.to_string()), ("base", base.to_string())],
            );
        }
        if report.general != (report.horizontal || report.vertical) {
            run.fail(
                n,
                "general flag disagrees with horizontal/vertical flags".into(),
                &[("op_table", t.to_string()), ("base", base.to_string())],
            );
        }
    }
}

fn annihilator_deg(run: &mut Run, n: usize) {
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        let annihilator = t.annihilator();
        for a in 1..=n {
            if (annihilator == Some(a)) != (t.degree(a) == 2 * (n - 1)) {
                run.fail(
                    n,
                    format!("element {a}: annihilator and degree tests disagree"),
                    &[("op_table", t.to_string())],
                );
            }
        }
    }
}

fn neutral_isolated(run: &mut Run, n: usize) {
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        let neutral = t.neutral_element();
        for e in 1..=n {
            if (neutral == Some(e)) != t.is_isolated(e, e) {
                run.fail(
                    n,
                    format!("element {e}: neutral and isolation tests disagree"),
                    &[("op_table", t.to_string())],
                );
            }
        }
    }
}

fn proj_shape(run: &mut Run, n: usize) {
    let base = LinearOrder::natural(n);
    let p1 = OpTable::projection_first(n);
    let p2 = OpTable::projection_second(n);
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        let flat = t.degree_sequence().as_slice().iter().all(|&d| d == n - 1);
        let lhs = t.is_order_preserving(&base) && flat;
        if lhs != (t == p1 || t == p2) {
            run.fail(
                n,
                "flat degree sequence and projection test disagree".into(),
                &[("op_table", t.to_string()), ("base", base.to_string())],
            );
        }
    }
}

/// Tables built from the weak orders passing `filter`, keyed by values.
fn built_tables(n: usize, filter: WeakOrderFilter) -> HashSet<Vec<usize>> {
    let mut set = HashSet::new();
    for w in enumerate_weak_orders(n, filter).expect("n >= 1") {
        for c in all_projection_choices(&w) {
            set.insert(build(&w, &c).expect("choices cover tied blocks").values().to_vec());
        }
    }
    set
}

fn thm_b(run: &mut Run, n: usize) {
    let from_quasilinear = built_tables(n, WeakOrderFilter::Quasilinear);
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        let bisymmetric = t.is_bisymmetric();
        let built = from_quasilinear.contains(t.values());
        let shaped = t.is_associative() && degree_sequence_shape(&t).is_some();
        if bisymmetric != built || bisymmetric != shaped {
            run.fail(
                n,
                format!(
                    "equivalence broken: bisymmetric={bisymmetric} built={built} shaped={shaped}"
                ),
                &[("op_table", t.to_string())],
            );
        }
    }
}

fn thm_bnd(run: &mut Run, n: usize) {
    let base = LinearOrder::natural(n);
    let from_wsp =
        built_tables(n, WeakOrderFilter::QuasilinearWeaklySinglePeaked(base.clone()));
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        let preserving = t.is_order_preserving(&base);
        let lhs = t.is_bisymmetric() && preserving;
        let built = from_wsp.contains(t.values());
        // no associativity check on this side
        let shaped = preserving && degree_sequence_shape(&t).is_some();
        if lhs != built || lhs != shaped {
            run.fail(
                n,
                format!("equivalence broken: bisym+preserving={lhs} built={built} shaped={shaped}"),
                &[("op_table", t.to_string()), ("base", base.to_string())],
            );
        }
    }
}

fn bs_quasilinear(run: &mut Run, n: usize) {
    for w in weak_orders(n) {
        for c in all_projection_choices(&w) {
            run.instances += 1;
            let t = build(&w, &c).expect("choices cover tied blocks");
            if t.is_bisymmetric() != w.is_quasilinear() {
                run.fail(
                    n,
                    "bisymmetry of the built table disagrees with quasilinearity".into(),
                    &[
                        ("weak_order", w.to_string()),
                        ("op_table", t.to_string()),
                    ],
                );
            }
        }
    }
}

fn subord_preserving(run: &mut Run, n: usize) {
    for w in weak_orders(n) {
        let subordinated = w.subordinated_linear_orders();
        for c in all_projection_choices(&w) {
            run.instances += 1;
            let t = build(&w, &c).expect("choices cover tied blocks");
            let all_preserving = subordinated.iter().all(|lin| t.is_order_preserving(lin));
            if w.is_quasilinear() != all_preserving {
                run.fail(
                    n,
                    "quasilinearity disagrees with preservation of subordinated orders".into(),
                    &[
                        ("weak_order", w.to_string()),
                        ("op_table", t.to_string()),
                    ],
                );
            }
        }
    }
}

fn autodist(run: &mut Run, n: usize) {
    for t in quasitrivial_tables(n) {
        run.instances += 1;
        if t.is_bisymmetric() != t.is_autodistributive() {
            run.fail(
                n,
                "bisymmetry and autodistributivity disagree".into(),
                &[("op_table", t.to_string())],
            );
        }
    }
}

fn wsp_graph(run: &mut Run, n: usize) {
    for base in bases_for(n) {
        for w in weak_orders(n) {
            run.instances += 1;
            let report = w.pattern_report(&base);
            let wsp = w.is_weakly_single_peaked(&base);
            let quasilinear = w.is_quasilinear();

            // no b strictly between a and c with b below a ~ c
            let mut no_low_middle_tied_ends = true;
            'scan: for i in 0..n {
                for j in i + 2..n {
                    let (la, lc) = (w.level(base.at(i)), w.level(base.at(j)));
                    if la != lc {
                        continue;
                    }
                    for k in i + 1..j {
                        if w.level(base.at(k)) < la {
                            no_low_middle_tied_ends = false;
                            break 'scan;
                        }
                    }
                }
            }

            let artifacts =
                [("weak_order", w.to_string()), ("base", base.to_string())];
            if wsp != report.weakly_single_peaked {
                run.fail(
                    n,
                    "pattern verdict disagrees with weak single-peakedness".into(),
                    &artifacts,
                );
            }
            if (wsp && no_low_middle_tied_ends) != (report.v_free && quasilinear) {
                run.fail(
                    n,
                    "two-condition characterization of quasilinear+wsp broken".into(),
                    &artifacts,
                );
            }
            if report.v_free && quasilinear && !report.same_level_pairs_are_plateaus {
                run.fail(
                    n,
                    "v-free and quasilinear but tied pairs fail the plateau condition".into(),
                    &artifacts,
                );
            }
            if report.same_level_pairs_are_plateaus && !quasilinear {
                run.fail(
                    n,
                    "plateau condition holds but the order is not quasilinear".into(),
                    &artifacts,
                );
            }
            if (quasilinear && wsp) != report.quasilinear_and_wsp {
                run.fail(
                    n,
                    "pattern verdict disagrees with quasilinear+wsp".into(),
                    &artifacts,
                );
            }
        }
    }
}

fn subord_sp(run: &mut Run, n: usize) {
    for base in bases_for(n) {
        for w in weak_orders(n) {
            run.instances += 1;
            let wsp = w.is_weakly_single_peaked(&base);
            let has_sp_subordinate = w
                .subordinated_linear_orders()
                .iter()
                .any(|lin| lin.is_single_peaked(&base));
            let artifacts =
                [("weak_order", w.to_string()), ("base", base.to_string())];
            if wsp && !has_sp_subordinate {
                run.fail(
                    n,
                    "weakly single-peaked but no single-peaked subordinated order".into(),
                    &artifacts,
                );
            }
            if w.is_quasilinear() && wsp != has_sp_subordinate {
                run.fail(
                    n,
                    "quasilinear: weak single-peakedness disagrees with the subordinate test"
                        .into(),
                    &artifacts,
                );
            }
        }
    }
}

fn max_structure(run: &mut Run, n: usize) {
    for base in bases_for(n) {
        for w in weak_orders(n) {
            run.instances += 1;
            let artifacts =
                [("weak_order", w.to_string()), ("base", base.to_string())];
            if !w.is_quasilinear() {
                continue;
            }
            if !(w.max_set().len() == n || w.max_set().len() == 1) {
                run.fail(n, "maximal block neither everything nor a singleton".into(), &artifacts);
            }
            if w.min_set().len() == 1 && !w.is_linear() {
                run.fail(n, "singleton minimal block but not a linear order".into(), &artifacts);
            }
            if w.is_weakly_single_peaked(&base) {
                if w.min_set().len() == 1 {
                    let lin = w.as_linear();
                    if lin.as_ref().is_none_or(|l| !l.is_single_peaked(&base)) {
                        run.fail(
                            n,
                            "singleton-minimum quasilinear wsp order is not single-peaked".into(),
                            &artifacts,
                        );
                    }
                }
                if w.blocks().len() > 1 {
                    let max = w.max_set();
                    if max.len() != 1
                        || !(max[0] == base.smallest() || max[0] == base.largest())
                    {
                        run.fail(
                            n,
                            "maximal element is not a base endpoint".into(),
                            &artifacts,
                        );
                    }
                }
            }
        }
    }
}
