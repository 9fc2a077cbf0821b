//! Decision procedures by exhaustive team enumeration, and truth tables.

use std::fmt::Write as _;

use crate::formula::{render, vars, Formula};
use crate::semantics::{Evaluator, Mode, SemanticsError};
use crate::team::{all_teams_bounded, valuations, IndexSet, DEFAULT_TEAM_GUARD};

fn union_domain<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> IndexSet {
    IndexSet::new(fs.into_iter().flat_map(vars))
}

fn guard(n: &IndexSet) -> Result<(), SemanticsError> {
    let _ = all_teams_bounded(n, DEFAULT_TEAM_GUARD)?;
    Ok(())
}

/// `⊨ f`. By downward closure it suffices to test the full team on vars(f).
pub fn is_valid(f: &Formula) -> Result<bool, SemanticsError> {
    let n = union_domain([f]);
    guard(&n)?;
    let mut ev = Evaluator::new(f, &n, Mode::Fast)?;
    Ok(ev.eval_mask(n.full_mask()))
}

/// Some nonempty team satisfies `f`. Downward closure reduces this to a scan
/// over singleton teams.
pub fn is_satisfiable(f: &Formula) -> Result<bool, SemanticsError> {
    let n = union_domain([f]);
    guard(&n)?;
    let mut ev = Evaluator::new(f, &n, Mode::Fast)?;
    Ok((0..n.valuation_count()).any(|i| ev.eval_mask(1 << i)))
}

/// `premises ⊨ f`, checked on every team over the union of the variables.
pub fn entails(premises: &[Formula], f: &Formula) -> Result<bool, SemanticsError> {
    Ok(entailment_counterexample(premises, f)?.is_none())
}

/// A team mask (over the union domain) satisfying every premise but not `f`.
pub fn entailment_counterexample(
    premises: &[Formula],
    f: &Formula,
) -> Result<Option<(IndexSet, u64)>, SemanticsError> {
    let n = union_domain(premises.iter().chain([f]));
    guard(&n)?;
    let mut pev = premises
        .iter()
        .map(|p| Evaluator::new(p, &n, Mode::Fast))
        .collect::<Result<Vec<_>, _>>()?;
    let mut fev = Evaluator::new(f, &n, Mode::Fast)?;
    for t in all_teams_bounded(&n, DEFAULT_TEAM_GUARD)? {
        let m = t.mask();
        if pev.iter_mut().all(|e| e.eval_mask(m)) && !fev.eval_mask(m) {
            return Ok(Some((n, m)));
        }
    }
    Ok(None)
}

/// `f ≡ g`: equal denotations over the union of their variables.
pub fn equivalent(f: &Formula, g: &Formula) -> Result<bool, SemanticsError> {
    let n = union_domain([f, g]);
    guard(&n)?;
    let mut fe = Evaluator::new(f, &n, Mode::Fast)?;
    let mut ge = Evaluator::new(g, &n, Mode::Fast)?;
    Ok(all_teams_bounded(&n, DEFAULT_TEAM_GUARD)?
        .all(|t| fe.eval_mask(t.mask()) == ge.eval_mask(t.mask())))
}

/// A truth table in the layout of a team-membership grid: one row per
/// valuation, one column per team, and the truth value of the formula in a
/// final row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub domain: IndexSet,
    pub formula: Formula,
    /// `(team mask, value)` per team in canonical order.
    pub columns: Vec<(u64, bool)>,
}

/// Tabulate `f` over every team on `n`.
pub fn truth_table(f: &Formula, n: &IndexSet) -> Result<Table, SemanticsError> {
    guard(n)?;
    let mut ev = Evaluator::new(f, n, Mode::Fast)?;
    let columns = all_teams_bounded(n, DEFAULT_TEAM_GUARD)?
        .map(|t| (t.mask(), ev.eval_mask(t.mask())))
        .collect();
    Ok(Table {
        domain: n.clone(),
        formula: f.clone(),
        columns,
    })
}

impl Table {
    fn member_bits(&self, mask: u64) -> String {
        (0..self.domain.valuation_count())
            .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Grid with valuations as rows and teams `X0, X1, ...` as columns.
    pub fn to_ascii(&self) -> String {
        let vars: Vec<String> = self.domain.vars().iter().map(|v| format!("p{v}")).collect();
        let left: Vec<String> = valuations(&self.domain)
            .iter()
            .map(|s| {
                let cells: Vec<String> = s
                    .bits()
                    .iter()
                    .zip(&vars)
                    .map(|(b, v)| format!("{:>w$}", u8::from(*b), w = v.len()))
                    .collect();
                format!("s{:<3} {}", s.index(), cells.join(" "))
            })
            .collect();
        let header_left = format!("{:<4} {}", "", vars.join(" "));
        let lw = header_left
            .len()
            .max(left.iter().map(String::len).max().unwrap_or(0));
        let cw = self.columns.len().saturating_sub(1).to_string().len() + 1;
        let mut out = String::new();
        let _ = write!(out, "{header_left:<lw$} |");
        for (k, _) in self.columns.iter().enumerate() {
            let _ = write!(out, " {:>cw$}", format!("X{k}"));
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "{}-+{}",
            "-".repeat(lw),
            "-".repeat(self.columns.len() * (cw + 1))
        );
        for (i, l) in left.iter().enumerate() {
            let _ = write!(out, "{l:<lw$} |");
            for (m, _) in &self.columns {
                let _ = write!(out, " {:>cw$}", m >> i & 1);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{}-+{}",
            "-".repeat(lw),
            "-".repeat(self.columns.len() * (cw + 1))
        );
        let _ = write!(out, "{:<lw$} |", render(&self.formula));
        for (_, v) in &self.columns {
            let _ = write!(out, " {:>cw$}", u8::from(*v));
        }
        out.push('\n');
        out
    }

    /// Valuation legend, a blank line, then `team_id,member_bitmask,value`
    /// rows. Character `i` of `member_bitmask` is membership of valuation `i`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let vars: Vec<String> = self.domain.vars().iter().map(|v| format!("p{v}")).collect();
        let mut head = vec!["valuation".to_string()];
        head.extend(vars);
        out.push_str(&head.join(","));
        out.push('\n');
        for s in valuations(&self.domain) {
            let mut row = vec![s.index().to_string()];
            row.extend(s.bits().iter().map(|b| u8::from(*b).to_string()));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out.push('\n');
        out.push_str("team_id,member_bitmask,value\n");
        for (k, (m, v)) in self.columns.iter().enumerate() {
            let _ = writeln!(out, "{k},{},{}", self.member_bits(*m), u8::from(*v));
        }
        out
    }
}
