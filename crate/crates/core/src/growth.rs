//! Event-driven simulation of disks growing around the cone points.
//!
//! All active disks share one radius. The next event is the smallest radius at which
//! an active disk touches itself, another active disk, or a frozen disk; the disks
//! involved freeze and one arc is drawn. Simultaneous candidates (radii within
//! [`TIE_TOLERANCE`] relative) are ordered pair-before-self, then by index pair.

use serde::{Deserialize, Serialize};

use crate::bounds::radius_bound;
use crate::error::{Error, Result};
use crate::hypmodel::MetricModel;
use crate::spheremap::SphereMap;

pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TouchKind {
    #[serde(rename = "self")]
    SelfTouch,
    #[serde(rename = "pair")]
    PairTouch,
}

/// One step of the process. For pair touches `i < j`; `other_frozen` marks a touch
/// between an active disk and a frozen one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEvent {
    pub m: usize,
    pub kind: TouchKind,
    pub i: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default)]
    pub other_frozen: bool,
    pub r: f64,
    pub k: u32,
    pub j_before: u32,
}

impl GrowthEvent {
    pub fn touch(&self) -> TouchKind {
        self.kind
    }

    /// Cone points on the drawn arc (one for a loop).
    pub fn endpoints(&self) -> (usize, usize) {
        (self.i, self.j.unwrap_or(self.i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthLog {
    pub genus: u32,
    pub model: String,
    pub events: Vec<GrowthEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusCheck {
    pub m: usize,
    pub r: f64,
    pub j_before: u32,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    r: f64,
    kind: TouchKind,
    lo: usize,
    hi: usize,
    other_frozen: bool,
}

impl Candidate {
    fn order_key(&self) -> (u8, usize, usize) {
        (matches!(self.kind, TouchKind::SelfTouch) as u8, self.lo, self.hi)
    }
}

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

pub fn simulate(model: &dyn MetricModel) -> Result<GrowthLog> {
    let n = model.n_points();
    let mut frozen: Vec<Option<f64>> = vec![None; n + 1];
    let mut radius = 0.0f64;
    let mut consumed = 0u32;
    let mut events = Vec::new();

    while (1..=n).any(|p| frozen[p].is_none()) {
        let mut cands = Vec::new();
        for p in (1..=n).filter(|&p| frozen[p].is_none()) {
            cands.push(Candidate { r: model.loop_radius(p), kind: TouchKind::SelfTouch, lo: p, hi: p, other_frozen: false });
            for q in 1..=n {
                if q == p {
                    continue;
                }
                let d = model.pair_distance(p, q);
                let c = match frozen[q] {
                    None if q > p => Candidate { r: d / 2.0, kind: TouchKind::PairTouch, lo: p, hi: q, other_frozen: false },
                    None => continue,
                    Some(rq) => {
                        Candidate { r: d - rq, kind: TouchKind::PairTouch, lo: p.min(q), hi: p.max(q), other_frozen: true }
                    }
                };
                cands.push(c);
            }
        }
        let rmin = cands.iter().map(|c| c.r).fold(f64::INFINITY, f64::min);
        if !rmin.is_finite() {
            return Err(Error::InvalidMetric("no finite event radius".into()));
        }
        if rmin < radius && !tied(rmin, radius) {
            return Err(Error::InvalidMetric(format!(
                "event {} would occur at radius {rmin} below the current radius {radius}; disks overlap",
                events.len() + 1
            )));
        }
        let best = *cands
            .iter()
            .filter(|c| tied(c.r, rmin))
            .min_by_key(|c| c.order_key())
            .expect("at least one candidate at the minimum");
        radius = radius.max(best.r);
        let k = match (best.kind, best.other_frozen) {
            (TouchKind::PairTouch, false) => {
                frozen[best.lo] = Some(radius);
                frozen[best.hi] = Some(radius);
                2
            }
            (TouchKind::PairTouch, true) => {
                let active = if frozen[best.lo].is_none() { best.lo } else { best.hi };
                frozen[active] = Some(radius);
                1
            }
            (TouchKind::SelfTouch, _) => {
                frozen[best.lo] = Some(radius);
                1
            }
        };
        events.push(GrowthEvent {
            m: events.len() + 1,
            kind: best.kind,
            i: best.lo,
            j: (best.kind == TouchKind::PairTouch).then_some(best.hi),
            other_frozen: best.other_frozen,
            r: radius,
            k,
            j_before: consumed,
        });
        consumed += k;
    }
    Ok(GrowthLog { genus: model.genus(), model: model.name(), events })
}

impl GrowthLog {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let log: GrowthLog = serde_json::from_str(text).map_err(|e| Error::Input(format!("growth log JSON: {e}")))?;
        log.check_well_formed()?;
        Ok(log)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::canonical::to_string_pretty(self)
    }

    /// Step numbering, index ranges, consumed counts and their prefix sums.
    pub fn check_well_formed(&self) -> Result<()> {
        let n = 2 * self.genus as usize + 2;
        let mut sum = 0;
        for (idx, e) in self.events.iter().enumerate() {
            let bad = |what: &str| Err(Error::Input(format!("event {}: {what}", idx + 1)));
            if e.m != idx + 1 {
                return bad("step index out of sequence");
            }
            let (i, j) = e.endpoints();
            if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                return bad("cone point out of range");
            }
            let expected_k = match e.kind {
                TouchKind::PairTouch if e.j.is_none() || i >= j => return bad("pair touch needs i < j"),
                TouchKind::PairTouch if !e.other_frozen => 2,
                _ => 1,
            };
            if e.k != expected_k {
                return bad("consumed count does not match the touch kind");
            }
            if e.j_before != sum {
                return bad("j_before is not the prefix sum of consumed counts");
            }
            if !e.r.is_finite() || e.r < 0.0 {
                return bad("radius must be finite and non-negative");
            }
            sum += e.k;
        }
        Ok(())
    }

    /// Termination bookkeeping: every point frozen once, total consumption `2g+2`,
    /// final prefix sum in `{2g, 2g+1}`, `g+1 ≤ M ≤ 2g+2`, radii nondecreasing.
    pub fn check_termination(&self) -> Result<()> {
        self.check_well_formed()?;
        let g = self.genus as usize;
        let n = 2 * g + 2;
        let fail = |msg: String| Err(Error::VerificationFailure(msg));
        let total: u32 = self.events.iter().map(|e| e.k).sum();
        if total as usize != n {
            return fail(format!("consumed counts sum to {total}, expected {n}"));
        }
        let last = self.events.last().map_or(0, |e| e.j_before) as usize;
        if last != 2 * g && last != 2 * g + 1 {
            return fail(format!("final prefix sum {last} not in {{2g, 2g+1}}"));
        }
        if !(g + 1..=n).contains(&self.events.len()) {
            return fail(format!("{} events outside [g+1, 2g+2]", self.events.len()));
        }
        if self.events.windows(2).any(|w| w[1].r < w[0].r) {
            return fail("event radii decrease".into());
        }
        let mut frozen = vec![0u32; n + 1];
        let mut active_before = vec![true; n + 1];
        for e in &self.events {
            let (i, j) = e.endpoints();
            if !(active_before[i] || active_before[j]) {
                return fail(format!("event {} joins two frozen points", e.m));
            }
            match (e.kind, e.other_frozen) {
                (TouchKind::PairTouch, false) => {
                    frozen[i] += 1;
                    frozen[j] += 1;
                }
                (TouchKind::PairTouch, true) => {
                    if active_before[i] == active_before[j] {
                        return fail(format!("event {} is not an active–frozen touch", e.m));
                    }
                    frozen[if active_before[i] { i } else { j }] += 1;
                }
                (TouchKind::SelfTouch, _) => frozen[i] += 1,
            }
            active_before[i] = frozen[i] == 0;
            active_before[j] = frozen[j] == 0;
        }
        if frozen[1..].iter().any(|&c| c != 1) {
            return fail("some cone point is not frozen exactly once".into());
        }
        Ok(())
    }
}

/// Checks every step against the area-derived radius bound and reports the slack.
pub fn verify_radius_bounds(log: &GrowthLog) -> Result<Vec<RadiusCheck>> {
    log.events
        .iter()
        .map(|e| {
            let bound = radius_bound(log.genus, e.j_before)?;
            if e.r > bound + TIE_TOLERANCE {
                return Err(Error::BoundViolation { step: e.m, radius: e.r, bound });
            }
            Ok(RadiusCheck { m: e.m, r: e.r, j_before: e.j_before, bound, slack: bound - e.r })
        })
        .collect()
}

/// The arc graph on the sphere, one arc per event with arc id equal to the step index.
pub fn arc_graph(log: &GrowthLog, model: &dyn MetricModel) -> Result<SphereMap> {
    if log.genus != model.genus() {
        return Err(Error::Input("growth log genus differs from the model genus".into()));
    }
    model.arc_map(&log.events)
}
