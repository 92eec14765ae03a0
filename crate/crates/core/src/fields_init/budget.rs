use super::FieldSnapshot;

/// Upper bounds on `y` and `q` that persist in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientBudget {
    /// `max(0, sup y(·,0))`.
    pub y_sup: f64,
    /// `max(0, sup q(·,0))`.
    pub q_sup: f64,
    /// Critical threshold (0 for isentropic data).
    pub threshold: f64,
    /// `max(N, Y)`.
    pub y_bar: f64,
    /// `max(N, Q)`.
    pub q_bar: f64,
}

impl GradientBudget {
    pub fn sum(&self) -> f64 {
        self.y_bar + self.q_bar
    }
}

/// Suprema are taken over grid nodes.
pub fn gradient_budget(snapshot: &FieldSnapshot, threshold: f64) -> GradientBudget {
    let y_sup = snapshot.y.iter().copied().fold(0.0, f64::max);
    let q_sup = snapshot.q.iter().copied().fold(0.0, f64::max);
    GradientBudget {
        y_sup,
        q_sup,
        threshold,
        y_bar: threshold.max(y_sup),
        q_bar: threshold.max(q_sup),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressiveNode {
    pub index: usize,
    pub x: f64,
    pub s_x: f64,
    pub r_x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    RarefactiveEverywhere,
    /// Nodes where `s_x < 0` or `r_x < 0`.
    Compressive(Vec<CompressiveNode>),
}

impl Classification {
    pub fn is_rarefactive(&self) -> bool {
        matches!(self, Classification::RarefactiveEverywhere)
    }
}

/// `s_x = 0` counts as rarefactive.
pub fn classify_initial(snapshot: &FieldSnapshot) -> Classification {
    let nodes: Vec<CompressiveNode> = (0..snapshot.len())
        .filter(|&i| snapshot.s_x[i] < 0.0 || snapshot.r_x[i] < 0.0)
        .map(|i| CompressiveNode {
            index: i,
            x: snapshot.grid.x(i),
            s_x: snapshot.s_x[i],
            r_x: snapshot.r_x[i],
        })
        .collect();
    if nodes.is_empty() {
        Classification::RarefactiveEverywhere
    } else {
        Classification::Compressive(nodes)
    }
}
