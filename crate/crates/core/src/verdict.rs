//! Structured check results.

use std::fmt;

use crate::rat::Rat;

/// Orientation of an open half-line of the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RayDirection {
    /// `(threshold, +inf)`
    Up,
    /// `(-inf, threshold)`
    Down,
}

/// An open half-space of the real line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray {
    pub direction: RayDirection,
    pub threshold: Rat,
}

impl Ray {
    pub fn up(threshold: Rat) -> Self {
        Ray { direction: RayDirection::Up, threshold }
    }

    pub fn down(threshold: Rat) -> Self {
        Ray { direction: RayDirection::Down, threshold }
    }

    pub fn contains(&self, y: &Rat) -> bool {
        match self.direction {
            RayDirection::Up => y > &self.threshold,
            RayDirection::Down => y < &self.threshold,
        }
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            RayDirection::Up => write!(f, "({}, +inf)", self.threshold),
            RayDirection::Down => write!(f, "(-inf, {})", self.threshold),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: Rat,
    pub detail: String,
    pub ray: Option<Ray>,
}

impl Witness {
    pub fn new(point: Rat, detail: impl Into<String>) -> Self {
        Witness { point, detail: detail.into(), ray: None }
    }

    pub fn with_ray(mut self, ray: Ray) -> Self {
        self.ray = Some(ray);
        self
    }
}

/// Outcome of a check. A failing verdict always carries at least one witness;
/// `clause` names the characterization the check instantiates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub clause: String,
    pub witnesses: Vec<Witness>,
}

impl Verdict {
    pub fn pass(clause: impl Into<String>) -> Self {
        Verdict { holds: true, clause: clause.into(), witnesses: Vec::new() }
    }

    pub fn fail(clause: impl Into<String>, witness: Witness) -> Self {
        Verdict { holds: false, clause: clause.into(), witnesses: vec![witness] }
    }

    /// Holds exactly when `witnesses` is empty.
    pub fn from_witnesses(clause: impl Into<String>, witnesses: Vec<Witness>) -> Self {
        Verdict { holds: witnesses.is_empty(), clause: clause.into(), witnesses }
    }

    /// Failing points, sorted and deduplicated.
    pub fn failing_points(&self) -> Vec<Rat> {
        let mut pts: Vec<Rat> = self.witnesses.iter().map(|w| w.point.clone()).collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.holds, self.clause)?;
        for w in &self.witnesses {
            write!(f, "\n  at {}: {}", w.point, w.detail)?;
            if let Some(ray) = &w.ray {
                write!(f, " (half-line {ray})")?;
            }
        }
        Ok(())
    }
}

/// Labels of the characterizations that checks and constructions instantiate.
pub mod clause {
    pub const QUASICONTINUITY: &str = "quasicontinuity: value is a one-sided limit";
    pub const SUBCONTINUITY: &str = "subcontinuity: all one-sided limits finite";
    pub const HYPERPLANE_MINIMALITY: &str =
        "hyperplane minimality: value between the one-sided limits";
    pub const USCO: &str = "usco: finite band limits contained in the breakpoint value";
    pub const CUSCO: &str = "cusco: usco with convex values";
    pub const CLOSED_GRAPH: &str = "closed graph: finite limit points contained in the value";
    pub const GRAPH_CLOSURE: &str = "graph closure of a subcontinuous selection is usco";
    pub const MINIMAL_USCO: &str =
        "minimal usco: closure of a quasicontinuous subcontinuous selection";
    pub const MINIMAL_CUSCO: &str = "minimal cusco: closed graph, quasicontinuous subcontinuous \
                                     envelopes with equal graph closures";
    pub const ENVELOPE_HULL: &str = "minimal cusco: F = co cl(sup F) = co cl(inf F) with \
                                     quasicontinuous subcontinuous envelopes";
    pub const ROUNDTRIP: &str =
        "minimal cusco: F = co cl(envelope restricted to its continuity points)";
    pub const FROM_SELECTION: &str =
        "minimal cusco: co cl f of a quasicontinuous subcontinuous selection";
    pub const FROM_DENSE_SELECTION: &str =
        "minimal cusco: co cl f of a densely defined quasicontinuous subcontinuous selection";
    pub const WITHIN_USCO: &str = "minimal usco inside a usco: cl(envelope | continuity points)";
    pub const WITHIN_CUSCO: &str =
        "minimal cusco inside a cusco: co cl(envelope | continuity points)";
    pub const UNIQUE_USCO: &str = "unique minimal usco inside a minimal cusco";
    pub const EXTREME: &str = "extreme functions share one graph closure";
    pub const MILMAN: &str = "extreme points of co K lie in K";
    pub const PLANAR_QC: &str = "planar quasicontinuity: value is a one-sided limit point";
    pub const PLANAR_HPMIN: &str =
        "planar hyperplane minimality: value in the hull of the one-sided limit points";
    pub const SUBDIFFERENTIAL: &str = "subdifferential of a convex function is minimal cusco";
    pub const ORACLE_QC: &str = "quasicontinuity by neighborhood enumeration";
    pub const ORACLE_HPMIN: &str = "hyperplane minimality by half-line enumeration";
    pub const ORACLE_USC: &str = "upper semicontinuity by neighborhood enumeration";
    pub const ORACLE_SUBMAP: &str = "minimal usco by proper-submap enumeration";
    pub const ORACLE_PLANAR_HPMIN: &str = "planar hyperplane minimality by half-plane enumeration";
}
