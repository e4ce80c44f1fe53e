/// One convergence checkpoint of an anytime run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: u64,
    /// Oracle evaluations spent by the run so far.
    pub evaluations: u64,
    /// Minimum cost over population entries meeting the feasibility threshold.
    pub best_feasible_cost: Option<f64>,
    /// `f` of the entry achieving `best_feasible_cost`.
    pub best_feasible_f: Option<f64>,
    pub population_size: usize,
}
