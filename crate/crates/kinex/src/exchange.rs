//! Exchange kernels for two-party wealth transactions.
//!
//! A transaction moves a stake `dm` from the loser to the winner of a
//! coin flip. Two rules set the stake:
//!
//! * yard-sale (YS): `dm = alpha * min(m_i, m_j)` — a fraction of the
//!   poorer party's wealth;
//! * theft-and-fraud (TF): `dm = alpha * m_loser` — a fraction of the
//!   loser's wealth.
//!
//! On top of the two pure rules sit three mixing schemes, selected by
//! [`ModelSpec`]: a designated set of TF agents in a YS population, a
//! per-agent split of each trade into a YS part and a TF part, and a
//! probabilistic per-transaction strategy choice.
//!
//! Everything here is pure apart from [`apply_transaction`] and friends,
//! which mutate a [`WealthVector`] in place. Total wealth is conserved
//! exactly (the winner gains what the loser loses) and no entry ever
//! goes negative: every rule's stake is bounded by the loser's wealth.

use std::collections::BTreeSet;
use std::fmt;

/// Relative drift allowed between the cached total and the recomputed sum.
pub const CONSERVATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum ExchangeError {
    /// A wealth or stake argument was negative or not finite.
    NegativeMoney { name: &'static str, value: f64 },
    /// A fraction argument (alpha, lambda, p) fell outside `[0, 1]`.
    FractionOutOfRange { name: &'static str, value: f64 },
    /// Transaction indices out of range or equal.
    BadAgentPair { i: usize, j: usize, n: usize },
    /// The winner is neither of the transacting parties.
    BadWinner { winner: usize, i: usize, j: usize },
    /// Model parameters inconsistent with the population.
    BadModel(String),
}

impl fmt::Display for ExchangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExchangeError::NegativeMoney { name, value } => {
                write!(f, "{name} must be a non-negative finite amount, got {value}")
            }
            ExchangeError::FractionOutOfRange { name, value } => {
                write!(f, "{name} must lie in [0, 1], got {value}")
            }
            ExchangeError::BadAgentPair { i, j, n } => {
                write!(f, "invalid agent pair ({i}, {j}) for population of {n}")
            }
            ExchangeError::BadWinner { winner, i, j } => {
                write!(f, "winner {winner} is neither party of ({i}, {j})")
            }
            ExchangeError::BadModel(msg) => write!(f, "invalid model: {msg}"),
        }
    }
}

impl std::error::Error for ExchangeError {}

fn check_money(name: &'static str, value: f64) -> Result<(), ExchangeError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ExchangeError::NegativeMoney { name, value })
    }
}

fn check_fraction(name: &'static str, value: f64) -> Result<(), ExchangeError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ExchangeError::FractionOutOfRange { name, value })
    }
}

/// The two pure exchange rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExchangeRule {
    YardSale,
    TheftAndFraud,
}

/// What a disagreeing pair does under probabilistic strategy choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisagreementPolicy {
    /// Disagreement trades by the yard-sale rule.
    FallbackYs,
    /// Disagreement skips the transaction (the time step is still consumed).
    Skip,
}

/// How the two components of a split-wealth transaction draw their
/// stochastic fraction and winner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    /// One alpha and one winner shared by the YS and TF components.
    Coupled,
    /// Each component draws its own alpha and winner.
    Independent,
}

/// Which economy is being simulated, with its quenched parameters.
///
/// Quenched per-agent parameters (`lambdas`, `ps`) are drawn once at
/// initialization and held fixed for the lifetime of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    PureYs,
    PureTf,
    /// A designated set of TF agents in a YS population; any transaction
    /// touching one of them goes by the TF rule.
    MixedAgents { tf_agents: BTreeSet<usize> },
    /// Every agent stakes `lambda_i` of its wealth YS-style and the
    /// remaining `1 - lambda_i` TF-style, in every transaction.
    SplitWealth { lambdas: Vec<f64>, mode: SplitMode },
    /// Agent `i` picks the YS rule with probability `ps[i]` each
    /// transaction; agreement trades by the agreed rule, disagreement is
    /// resolved by the policy.
    ProbabilisticChoice {
        ps: Vec<f64>,
        disagreement: DisagreementPolicy,
    },
}

impl ModelSpec {
    /// Check parameter ranges and sizes against a population of `n` agents.
    pub fn validate(&self, n: usize) -> Result<(), ExchangeError> {
        match self {
            ModelSpec::PureYs | ModelSpec::PureTf => Ok(()),
            ModelSpec::MixedAgents { tf_agents } => {
                if tf_agents.is_empty() {
                    return Err(ExchangeError::BadModel("tf_agents must be non-empty".into()));
                }
                if let Some(&bad) = tf_agents.iter().find(|&&a| a >= n) {
                    return Err(ExchangeError::BadModel(format!(
                        "tf_agents index {bad} out of range for {n} agents"
                    )));
                }
                Ok(())
            }
            ModelSpec::SplitWealth { lambdas, .. } => {
                if lambdas.len() != n {
                    return Err(ExchangeError::BadModel(format!(
                        "expected {n} lambdas, got {}",
                        lambdas.len()
                    )));
                }
                for &l in lambdas {
                    check_fraction("lambda", l)?;
                }
                Ok(())
            }
            ModelSpec::ProbabilisticChoice { ps, .. } => {
                if ps.len() != n {
                    return Err(ExchangeError::BadModel(format!(
                        "expected {n} strategy probabilities, got {}",
                        ps.len()
                    )));
                }
                for &p in ps {
                    check_fraction("p", p)?;
                }
                Ok(())
            }
        }
    }
}

/// The `N` agent wealths, with a cached total for conservation checks.
///
/// The cached total never changes after construction: transfers move
/// money between entries. `conservation_drift` measures how far floating
/// point has pushed the recomputed sum from the cached value.
#[derive(Debug, Clone, PartialEq)]
pub struct WealthVector {
    wealths: Vec<f64>,
    total: f64,
}

impl WealthVector {
    /// Divide `total` equally among `n` agents.
    pub fn equal_split(n: usize, total: f64) -> Self {
        assert!(n > 0, "population must be non-empty");
        assert!(total.is_finite() && total > 0.0, "total money must be positive");
        WealthVector {
            wealths: vec![total / n as f64; n],
            total,
        }
    }

    /// Build from explicit wealths; every entry must be non-negative.
    pub fn from_wealths(wealths: Vec<f64>) -> Result<Self, ExchangeError> {
        for &w in &wealths {
            check_money("wealth", w)?;
        }
        let total = wealths.iter().sum();
        Ok(WealthVector { wealths, total })
    }

    pub fn len(&self) -> usize {
        self.wealths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wealths.is_empty()
    }

    pub fn wealth(&self, agent: usize) -> f64 {
        self.wealths[agent]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.wealths
    }

    /// Total money in the economy, fixed at construction.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Largest single wealth.
    pub fn richest(&self) -> f64 {
        self.wealths.iter().cloned().fold(0.0, f64::max)
    }

    /// `|sum - total| / total` of the entries against the cached total
    /// (absolute drift when the total is zero).
    pub fn conservation_drift(&self) -> f64 {
        let sum: f64 = self.wealths.iter().sum();
        let drift = (sum - self.total).abs();
        if self.total > 0.0 {
            drift / self.total
        } else {
            drift
        }
    }

    /// Move `amount` from one agent to another.
    ///
    /// Aborts if the amount exceeds the payer's wealth: stakes are bounded
    /// by construction, so that can only mean a kernel bug.
    pub(crate) fn transfer(&mut self, from: usize, to: usize, amount: f64) {
        assert!(
            amount >= 0.0 && amount <= self.wealths[from],
            "stake {amount} exceeds payer wealth {} (kernel bug)",
            self.wealths[from]
        );
        self.wealths[from] -= amount;
        self.wealths[to] += amount;
        debug_assert!(self.wealths[from] >= 0.0 && self.wealths[to] >= 0.0);
    }
}

/// One two-party transaction: the pair, the stochastic fraction, and the
/// coin-flip winner. `rule_draws` keeps the uniform variates behind each
/// party's strategy choice when the model uses them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transaction {
    pub i: usize,
    pub j: usize,
    pub alpha: f64,
    pub winner: usize,
    pub rule_draws: Option<(f64, f64)>,
}

impl Transaction {
    pub fn new(i: usize, j: usize, alpha: f64, winner: usize) -> Result<Self, ExchangeError> {
        if i == j {
            return Err(ExchangeError::BadAgentPair { i, j, n: usize::MAX });
        }
        check_fraction("alpha", alpha)?;
        if winner != i && winner != j {
            return Err(ExchangeError::BadWinner { winner, i, j });
        }
        Ok(Transaction {
            i,
            j,
            alpha,
            winner,
            rule_draws: None,
        })
    }

    pub fn with_rule_draws(mut self, draws: (f64, f64)) -> Self {
        self.rule_draws = Some(draws);
        self
    }

    pub fn loser(&self) -> usize {
        if self.winner == self.i {
            self.j
        } else {
            self.i
        }
    }
}

/// Yard-sale stake: `alpha * min(m_i, m_j)`.
pub fn ys_stake(m_i: f64, m_j: f64, alpha: f64) -> Result<f64, ExchangeError> {
    check_money("m_i", m_i)?;
    check_money("m_j", m_j)?;
    check_fraction("alpha", alpha)?;
    Ok(alpha * m_i.min(m_j))
}

/// Theft-and-fraud stake: `alpha * m_loser`.
pub fn tf_stake(m_loser: f64, alpha: f64) -> Result<f64, ExchangeError> {
    check_money("m_loser", m_loser)?;
    check_fraction("alpha", alpha)?;
    Ok(alpha * m_loser)
}

/// Coupled split stake: the YS part `alpha * min(lambda_l * m_l,
/// lambda_w * m_w)` plus the TF part `alpha * (1 - lambda_l) * m_l`,
/// where `l` is the loser and `w` the winner.
///
/// The exact value never exceeds the loser's wealth; the final clamp only
/// absorbs last-ulp rounding of the two products.
pub fn split_stake(
    m_loser: f64,
    lambda_loser: f64,
    m_winner: f64,
    lambda_winner: f64,
    alpha: f64,
) -> Result<f64, ExchangeError> {
    check_money("m_loser", m_loser)?;
    check_money("m_winner", m_winner)?;
    check_fraction("lambda_loser", lambda_loser)?;
    check_fraction("lambda_winner", lambda_winner)?;
    check_fraction("alpha", alpha)?;
    let ys_part = alpha * (lambda_loser * m_loser).min(lambda_winner * m_winner);
    let tf_part = alpha * ((1.0 - lambda_loser) * m_loser);
    Ok((ys_part + tf_part).min(m_loser))
}

/// Outcome of rule selection for one transaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleChoice {
    Trade(ExchangeRule),
    /// Probabilistic choice with the `Skip` policy and disagreeing parties.
    Skip,
}

/// Select the exchange rule governing the transaction between `i` and `j`.
///
/// `strategy_draws` are the two uniform variates consumed by probabilistic
/// choice (a draw below `ps[agent]` selects YS); other models ignore them.
/// Split-wealth transactions carry both rule components at once and do not
/// route through rule selection — calling this with a split model panics.
pub fn choose_rule(
    model: &ModelSpec,
    i: usize,
    j: usize,
    strategy_draws: Option<(f64, f64)>,
) -> RuleChoice {
    match model {
        ModelSpec::PureYs => RuleChoice::Trade(ExchangeRule::YardSale),
        ModelSpec::PureTf => RuleChoice::Trade(ExchangeRule::TheftAndFraud),
        ModelSpec::MixedAgents { tf_agents } => {
            if tf_agents.contains(&i) || tf_agents.contains(&j) {
                RuleChoice::Trade(ExchangeRule::TheftAndFraud)
            } else {
                RuleChoice::Trade(ExchangeRule::YardSale)
            }
        }
        ModelSpec::ProbabilisticChoice { ps, disagreement } => {
            let (u_i, u_j) =
                strategy_draws.expect("probabilistic choice requires strategy draws");
            let ys_i = u_i < ps[i];
            let ys_j = u_j < ps[j];
            match (ys_i, ys_j) {
                (true, true) => RuleChoice::Trade(ExchangeRule::YardSale),
                (false, false) => RuleChoice::Trade(ExchangeRule::TheftAndFraud),
                _ => match disagreement {
                    DisagreementPolicy::FallbackYs => RuleChoice::Trade(ExchangeRule::YardSale),
                    DisagreementPolicy::Skip => RuleChoice::Skip,
                },
            }
        }
        ModelSpec::SplitWealth { .. } => {
            panic!("split-wealth transactions do not select a single rule")
        }
    }
}

/// Per-transaction stake rule, resolved by [`choose_rule`] or taken from
/// split-wealth parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StakeRule {
    Exchange(ExchangeRule),
    /// Coupled split: both components share the transaction's alpha and winner.
    Split { lambda_i: f64, lambda_j: f64 },
}

/// Apply one transaction: the winner gains the stake, the loser loses it,
/// every other entry is untouched. Returns the moved stake.
pub fn apply_transaction(
    state: &mut WealthVector,
    txn: &Transaction,
    rule: StakeRule,
) -> Result<f64, ExchangeError> {
    let n = state.len();
    if txn.i >= n || txn.j >= n || txn.i == txn.j {
        return Err(ExchangeError::BadAgentPair { i: txn.i, j: txn.j, n });
    }
    check_fraction("alpha", txn.alpha)?;
    if txn.winner != txn.i && txn.winner != txn.j {
        return Err(ExchangeError::BadWinner {
            winner: txn.winner,
            i: txn.i,
            j: txn.j,
        });
    }
    let winner = txn.winner;
    let loser = txn.loser();
    let m_w = state.wealth(winner);
    let m_l = state.wealth(loser);
    let stake = match rule {
        StakeRule::Exchange(ExchangeRule::YardSale) => ys_stake(m_w, m_l, txn.alpha)?,
        StakeRule::Exchange(ExchangeRule::TheftAndFraud) => tf_stake(m_l, txn.alpha)?,
        StakeRule::Split { lambda_i, lambda_j } => {
            let (lambda_w, lambda_l) = if winner == txn.i {
                (lambda_i, lambda_j)
            } else {
                (lambda_j, lambda_i)
            };
            split_stake(m_l, lambda_l, m_w, lambda_w, txn.alpha)?
        }
    };
    state.transfer(loser, winner, stake);
    Ok(stake)
}

/// Stochastic draws for an independent-mode split transaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitDraws {
    pub ys_alpha: f64,
    pub ys_winner: usize,
    pub tf_alpha: f64,
    pub tf_winner: usize,
}

/// Apply one split-wealth transaction in `Independent` mode: the YS and TF
/// components each carry their own alpha and winner, both priced from the
/// pre-transaction wealths. Returns the two component stakes.
pub fn apply_split_independent(
    state: &mut WealthVector,
    i: usize,
    j: usize,
    lambda_i: f64,
    lambda_j: f64,
    draws: SplitDraws,
) -> Result<(f64, f64), ExchangeError> {
    let n = state.len();
    if i >= n || j >= n || i == j {
        return Err(ExchangeError::BadAgentPair { i, j, n });
    }
    check_fraction("lambda_i", lambda_i)?;
    check_fraction("lambda_j", lambda_j)?;
    for winner in [draws.ys_winner, draws.tf_winner] {
        if winner != i && winner != j {
            return Err(ExchangeError::BadWinner { winner, i, j });
        }
    }
    let (m_i, m_j) = (state.wealth(i), state.wealth(j));

    let ys = ys_stake(lambda_i * m_i, lambda_j * m_j, draws.ys_alpha)?;
    let ys_loser = if draws.ys_winner == i { j } else { i };
    state.transfer(ys_loser, draws.ys_winner, ys);

    let tf_loser = if draws.tf_winner == i { j } else { i };
    let (m_l, lambda_l) = if tf_loser == i {
        (m_i, lambda_i)
    } else {
        (m_j, lambda_j)
    };
    // Priced from the pre-transaction state; the YS component leaves at
    // least (1 - lambda_l) * m_l behind, so the clamp only eats rounding.
    let tf = tf_stake((1.0 - lambda_l) * m_l, draws.tf_alpha)?.min(state.wealth(tf_loser));
    state.transfer(tf_loser, draws.tf_winner, tf);

    Ok((ys, tf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tx(i: usize, j: usize, alpha: f64, winner: usize) -> Transaction {
        Transaction::new(i, j, alpha, winner).unwrap()
    }

    #[test]
    fn ys_stake_examples() {
        assert_eq!(ys_stake(4.0, 2.0, 0.5).unwrap(), 1.0);
        assert_eq!(ys_stake(4.0, 2.0, 0.0).unwrap(), 0.0);
        assert_eq!(ys_stake(3.0, 3.0, 1.0).unwrap(), 3.0);
    }

    #[test]
    fn tf_stake_examples() {
        assert_eq!(tf_stake(2.0, 1.0).unwrap(), 2.0);
        assert_eq!(tf_stake(5.0, 0.0).unwrap(), 0.0);
        assert_eq!(tf_stake(10.0, 0.3).unwrap(), 3.0);
    }

    #[test]
    fn split_stake_examples() {
        // lambda = 1 reduces to the YS stake
        assert_eq!(split_stake(2.0, 1.0, 4.0, 1.0, 0.5).unwrap(), 1.0);
        // lambda = 0 reduces to the TF stake on the loser
        assert_eq!(split_stake(2.0, 0.0, 4.0, 0.0, 0.5).unwrap(), 1.0);
        // mixed case: min(0.5*2, 0.5*4) + 0.5*2 = 1 + 1 = 2 at alpha = 1
        assert_eq!(split_stake(2.0, 0.5, 4.0, 0.5, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn stake_domain_errors() {
        assert!(matches!(
            ys_stake(-1.0, 2.0, 0.5),
            Err(ExchangeError::NegativeMoney { name: "m_i", .. })
        ));
        assert!(matches!(
            ys_stake(1.0, 2.0, 1.5),
            Err(ExchangeError::FractionOutOfRange { name: "alpha", .. })
        ));
        assert!(tf_stake(f64::NAN, 0.5).is_err());
        assert!(tf_stake(1.0, -0.1).is_err());
        assert!(split_stake(1.0, 1.2, 1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn choose_rule_mixed_agents() {
        let model = ModelSpec::MixedAgents {
            tf_agents: BTreeSet::from([3]),
        };
        assert_eq!(
            choose_rule(&model, 3, 7, None),
            RuleChoice::Trade(ExchangeRule::TheftAndFraud)
        );
        assert_eq!(
            choose_rule(&model, 7, 3, None),
            RuleChoice::Trade(ExchangeRule::TheftAndFraud)
        );
        assert_eq!(
            choose_rule(&model, 1, 2, None),
            RuleChoice::Trade(ExchangeRule::YardSale)
        );
    }

    #[test]
    fn choose_rule_probabilistic() {
        let model = ModelSpec::ProbabilisticChoice {
            ps: vec![0.5, 0.5],
            disagreement: DisagreementPolicy::FallbackYs,
        };
        // draw < p selects YS
        assert_eq!(
            choose_rule(&model, 0, 1, Some((0.9, 0.9))),
            RuleChoice::Trade(ExchangeRule::TheftAndFraud)
        );
        assert_eq!(
            choose_rule(&model, 0, 1, Some((0.1, 0.2))),
            RuleChoice::Trade(ExchangeRule::YardSale)
        );
        // disagreement falls back to YS
        assert_eq!(
            choose_rule(&model, 0, 1, Some((0.1, 0.9))),
            RuleChoice::Trade(ExchangeRule::YardSale)
        );
        let skip = ModelSpec::ProbabilisticChoice {
            ps: vec![0.5, 0.5],
            disagreement: DisagreementPolicy::Skip,
        };
        assert_eq!(choose_rule(&skip, 0, 1, Some((0.1, 0.9))), RuleChoice::Skip);
        assert_eq!(
            choose_rule(&skip, 0, 1, Some((0.9, 0.1))),
            RuleChoice::Skip
        );
    }

    #[test]
    fn pure_rules_are_unconditional() {
        assert_eq!(
            choose_rule(&ModelSpec::PureYs, 0, 1, None),
            RuleChoice::Trade(ExchangeRule::YardSale)
        );
        assert_eq!(
            choose_rule(&ModelSpec::PureTf, 0, 1, None),
            RuleChoice::Trade(ExchangeRule::TheftAndFraud)
        );
    }

    #[test]
    fn apply_transaction_examples() {
        let mut state = WealthVector::from_wealths(vec![4.0, 2.0]).unwrap();
        let dm = apply_transaction(
            &mut state,
            &tx(0, 1, 0.5, 0),
            StakeRule::Exchange(ExchangeRule::YardSale),
        )
        .unwrap();
        assert_eq!(dm, 1.0);
        assert_eq!(state.as_slice(), &[5.0, 1.0]);

        let mut state = WealthVector::from_wealths(vec![4.0, 2.0]).unwrap();
        apply_transaction(
            &mut state,
            &tx(0, 1, 0.0, 0),
            StakeRule::Exchange(ExchangeRule::YardSale),
        )
        .unwrap();
        assert_eq!(state.as_slice(), &[4.0, 2.0]);

        let mut state = WealthVector::from_wealths(vec![4.0, 2.0]).unwrap();
        apply_transaction(
            &mut state,
            &tx(0, 1, 1.0, 0),
            StakeRule::Exchange(ExchangeRule::TheftAndFraud),
        )
        .unwrap();
        assert_eq!(state.as_slice(), &[6.0, 0.0]);
    }

    #[test]
    fn apply_transaction_touches_only_the_pair() {
        let mut state = WealthVector::from_wealths(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        apply_transaction(
            &mut state,
            &tx(1, 3, 0.5, 3),
            StakeRule::Exchange(ExchangeRule::YardSale),
        )
        .unwrap();
        assert_eq!(state.wealth(0), 1.0);
        assert_eq!(state.wealth(2), 3.0);
        assert_eq!(state.total(), 10.0);
    }

    #[test]
    fn transaction_validation() {
        assert!(Transaction::new(2, 2, 0.5, 2).is_err());
        assert!(Transaction::new(0, 1, 1.5, 0).is_err());
        assert!(Transaction::new(0, 1, 0.5, 2).is_err());
        let mut state = WealthVector::from_wealths(vec![1.0, 2.0]).unwrap();
        let bad = Transaction {
            i: 0,
            j: 5,
            alpha: 0.5,
            winner: 0,
            rule_draws: None,
        };
        assert!(matches!(
            apply_transaction(&mut state, &bad, StakeRule::Exchange(ExchangeRule::YardSale)),
            Err(ExchangeError::BadAgentPair { .. })
        ));
    }

    #[test]
    fn model_validation() {
        assert!(ModelSpec::MixedAgents {
            tf_agents: BTreeSet::new()
        }
        .validate(4)
        .is_err());
        assert!(ModelSpec::MixedAgents {
            tf_agents: BTreeSet::from([4])
        }
        .validate(4)
        .is_err());
        assert!(ModelSpec::SplitWealth {
            lambdas: vec![0.5; 3],
            mode: SplitMode::Coupled
        }
        .validate(4)
        .is_err());
        assert!(ModelSpec::ProbabilisticChoice {
            ps: vec![0.5, 1.1],
            disagreement: DisagreementPolicy::FallbackYs
        }
        .validate(2)
        .is_err());
        assert!(ModelSpec::SplitWealth {
            lambdas: vec![0.5; 4],
            mode: SplitMode::Coupled
        }
        .validate(4)
        .is_ok());
    }

    #[test]
    fn independent_split_conserves() {
        let mut state = WealthVector::from_wealths(vec![4.0, 2.0]).unwrap();
        let draws = SplitDraws {
            ys_alpha: 0.9,
            ys_winner: 0,
            tf_alpha: 1.0,
            tf_winner: 0,
        };
        let (ys, tf) = apply_split_independent(&mut state, 0, 1, 0.5, 0.5, draws).unwrap();
        assert_eq!(ys, 0.9);
        assert_eq!(tf, 1.0);
        assert!(state.wealth(1) >= 0.0);
        assert!(state.conservation_drift() < 1e-15);
    }

    proptest! {
        #[test]
        fn stake_never_exceeds_loser(
            m_w in 0.0..1e6f64,
            m_l in 0.0..1e6f64,
            lambda_w in 0.0..=1.0f64,
            lambda_l in 0.0..=1.0f64,
            alpha in 0.0..=1.0f64,
        ) {
            prop_assert!(ys_stake(m_w, m_l, alpha).unwrap() <= m_l.min(m_w));
            prop_assert!(tf_stake(m_l, alpha).unwrap() <= m_l);
            prop_assert!(split_stake(m_l, lambda_l, m_w, lambda_w, alpha).unwrap() <= m_l);
        }

        #[test]
        fn split_limits_reduce_to_pure_rules(
            m_w in 0.0..1e6f64,
            m_l in 0.0..1e6f64,
            alpha in 0.0..=1.0f64,
        ) {
            // bitwise identical, not merely close
            prop_assert_eq!(
                split_stake(m_l, 1.0, m_w, 1.0, alpha).unwrap().to_bits(),
                ys_stake(m_w, m_l, alpha).unwrap().to_bits()
            );
            prop_assert_eq!(
                split_stake(m_l, 0.0, m_w, 0.0, alpha).unwrap().to_bits(),
                tf_stake(m_l, alpha).unwrap().to_bits()
            );
        }

        #[test]
        fn transactions_conserve_and_localize(
            wealths in proptest::collection::vec(0.0..100.0f64, 2..12),
            alpha in 0.0..=1.0f64,
            lambda_i in 0.0..=1.0f64,
            lambda_j in 0.0..=1.0f64,
            pick in 0..3usize,
            winner_is_i: bool,
        ) {
            let n = wealths.len();
            let before = WealthVector::from_wealths(wealths).unwrap();
            let mut state = before.clone();
            let (i, j) = (0, n - 1);
            let winner = if winner_is_i { i } else { j };
            let rule = match pick {
                0 => StakeRule::Exchange(ExchangeRule::YardSale),
                1 => StakeRule::Exchange(ExchangeRule::TheftAndFraud),
                _ => StakeRule::Split { lambda_i, lambda_j },
            };
            apply_transaction(&mut state, &tx(i, j, alpha, winner), rule).unwrap();
            prop_assert!(state.conservation_drift() < CONSERVATION_TOLERANCE);
            for k in 1..n - 1 {
                prop_assert_eq!(state.wealth(k), before.wealth(k));
            }
            for k in 0..n {
                prop_assert!(state.wealth(k) >= 0.0);
            }
        }
    }
}
