//! Valuations, teams and families of teams over a finite index set.
//!
//! Valuations on `N = {i_1 < ... < i_n}` are numbered by reading the bit
//! vector `(s(i_1), ..., s(i_n))` as a binary number with `s(i_1)` as the most
//! significant bit. A team is stored as a bitmask over those numbers, and the
//! canonical team order is the numeric order of that bitmask.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::VarId;

/// Largest index set a team can live on (64 valuations fit one bitmask).
pub const MAX_TEAM_VARS: usize = 6;
/// Default bound on `|N|` when enumerating all teams.
pub const DEFAULT_TEAM_GUARD: usize = 4;
/// Default bound on `|N|` when enumerating families of teams.
pub const DEFAULT_FAMILY_GUARD: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TeamError {
    #[error("index set has {size} variables; the limit here is {limit}")]
    SizeGuard { size: usize, limit: usize },
    #[error("{0}")]
    BadDomain(String),
    #[error("team file: {0}")]
    Format(String),
}

/// A strictly ascending list of variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct IndexSet(Vec<VarId>);

impl IndexSet {
    pub fn new(vars: impl IntoIterator<Item = VarId>) -> IndexSet {
        let set: BTreeSet<VarId> = vars.into_iter().collect();
        IndexSet(set.into_iter().collect())
    }

    pub fn empty() -> IndexSet {
        IndexSet(Vec::new())
    }

    pub fn vars(&self) -> &[VarId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, v: VarId) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.position(v).is_some()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Number of valuations on this set.
    pub fn valuation_count(&self) -> usize {
        1usize << self.0.len()
    }

    /// Bitmask of the full team `2^N`.
    pub fn full_mask(&self) -> u64 {
        let n = self.valuation_count();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    /// Value of variable number `pos` (0-based position) in valuation `index`.
    pub fn bit(&self, index: usize, pos: usize) -> bool {
        (index >> (self.0.len() - 1 - pos)) & 1 == 1
    }

    fn guard(&self, limit: usize) -> Result<(), TeamError> {
        if self.0.len() > limit {
            Err(TeamError::SizeGuard {
                size: self.0.len(),
                limit,
            })
        } else {
            Ok(())
        }
    }
}

impl From<BTreeSet<VarId>> for IndexSet {
    fn from(s: BTreeSet<VarId>) -> IndexSet {
        IndexSet(s.into_iter().collect())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|v| format!("p{v}")).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// A function from an index set to {0,1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    domain: IndexSet,
    index: usize,
}

impl Valuation {
    pub fn from_index(domain: IndexSet, index: usize) -> Valuation {
        assert!(
            index < domain.valuation_count(),
            "valuation index out of range"
        );
        Valuation { domain, index }
    }

    /// Build from one bit per index, in ascending index order.
    pub fn from_bits(domain: IndexSet, bits: &[bool]) -> Valuation {
        assert_eq!(bits.len(), domain.len(), "one bit per variable");
        let index = bits
            .iter()
            .fold(0usize, |acc, b| (acc << 1) | usize::from(*b));
        Valuation { domain, index }
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    /// Position in the canonical valuation order.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.domain.len())
            .map(|p| self.domain.bit(self.index, p))
            .collect()
    }

    pub fn get(&self, v: VarId) -> Option<bool> {
        self.domain
            .position(v)
            .map(|p| self.domain.bit(self.index, p))
    }

    /// Bits as a `0`/`1` string over the ascending domain.
    pub fn bitstring(&self) -> String {
        self.bits()
            .iter()
            .map(|b| if *b { '1' } else { '0' })
            .collect()
    }
}

/// All `2^|N|` valuations in canonical order.
pub fn valuations(n: &IndexSet) -> Vec<Valuation> {
    (0..n.valuation_count())
        .map(|i| Valuation::from_index(n.clone(), i))
        .collect()
}

/// A set of valuations over a common domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Team {
    domain: IndexSet,
    mask: u64,
}

impl Team {
    pub fn from_mask(domain: IndexSet, mask: u64) -> Result<Team, TeamError> {
        domain.guard(MAX_TEAM_VARS)?;
        if mask & !domain.full_mask() != 0 {
            return Err(TeamError::BadDomain(format!(
                "mask {mask:#x} exceeds the valuations of {domain}"
            )));
        }
        Ok(Team { domain, mask })
    }

    pub fn empty(domain: IndexSet) -> Result<Team, TeamError> {
        Team::from_mask(domain, 0)
    }

    pub fn full(domain: IndexSet) -> Result<Team, TeamError> {
        let m = domain.full_mask();
        Team::from_mask(domain, m)
    }

    pub fn from_valuations(
        domain: IndexSet,
        members: impl IntoIterator<Item = Valuation>,
    ) -> Result<Team, TeamError> {
        domain.guard(MAX_TEAM_VARS)?;
        let mut mask = 0u64;
        for s in members {
            if s.domain != domain {
                return Err(TeamError::BadDomain(format!(
                    "valuation on {} in a team on {}",
                    s.domain, domain
                )));
            }
            mask |= 1 << s.index;
        }
        Ok(Team { domain, mask })
    }

    /// Build from rows of bits over the ascending domain; duplicates collapse.
    pub fn from_rows(domain: IndexSet, rows: &[Vec<bool>]) -> Result<Team, TeamError> {
        let mut members = Vec::new();
        for r in rows {
            if r.len() != domain.len() {
                return Err(TeamError::Format(format!(
                    "row has {} values but the domain has {} variables",
                    r.len(),
                    domain.len()
                )));
            }
            members.push(Valuation::from_bits(domain.clone(), r));
        }
        Team::from_valuations(domain, members)
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, s: &Valuation) -> bool {
        s.domain == self.domain && self.mask >> s.index & 1 == 1
    }

    pub fn is_subset(&self, other: &Team) -> bool {
        self.domain == other.domain && self.mask & !other.mask == 0
    }

    /// Members in canonical valuation order.
    pub fn members(&self) -> Vec<Valuation> {
        mask_members(self.mask)
            .map(|i| Valuation::from_index(self.domain.clone(), i))
            .collect()
    }

    /// All `2^|X|` subteams, in ascending bitmask order.
    pub fn subteams(&self) -> impl Iterator<Item = Team> + '_ {
        submasks(self.mask).map(move |m| Team {
            domain: self.domain.clone(),
            mask: m,
        })
    }

    /// Pointwise restriction to `m`, with duplicates collapsed.
    pub fn restrict(&self, m: &IndexSet) -> Result<Team, TeamError> {
        if !m.is_subset(&self.domain) {
            return Err(TeamError::BadDomain(format!(
                "{m} is not a subset of {}",
                self.domain
            )));
        }
        let positions: Vec<usize> = m
            .vars()
            .iter()
            .map(|v| self.domain.position(*v).unwrap())
            .collect();
        let mut mask = 0u64;
        for i in mask_members(self.mask) {
            let bits: Vec<bool> = positions.iter().map(|p| self.domain.bit(i, *p)).collect();
            mask |= 1 << Valuation::from_bits(m.clone(), &bits).index;
        }
        Ok(Team {
            domain: m.clone(),
            mask,
        })
    }

    /// Re-express the team over a larger domain by taking every extension of
    /// each member (the cylinder over the new variables).
    pub fn cylinder(&self, bigger: &IndexSet) -> Result<Team, TeamError> {
        bigger.guard(MAX_TEAM_VARS)?;
        if !self.domain.is_subset(bigger) {
            return Err(TeamError::BadDomain(format!(
                "{} is not a subset of {bigger}",
                self.domain
            )));
        }
        let mut mask = 0u64;
        for i in 0..bigger.valuation_count() {
            let s = Valuation::from_index(bigger.clone(), i);
            let bits: Vec<bool> = self
                .domain
                .vars()
                .iter()
                .map(|v| s.get(*v).unwrap())
                .collect();
            if self.mask >> Valuation::from_bits(self.domain.clone(), &bits).index & 1 == 1 {
                mask |= 1 << i;
            }
        }
        Ok(Team {
            domain: bigger.clone(),
            mask,
        })
    }

    /// Read the CSV team format: a `p<i>,...` header then rows of 0/1.
    pub fn from_csv(reader: impl Read) -> Result<Team, TeamError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| TeamError::Format(e.to_string()))?
            .clone();
        let mut vars = Vec::new();
        for h in headers.iter() {
            let v = h
                .strip_prefix('p')
                .and_then(|d| d.parse::<VarId>().ok())
                .ok_or_else(|| TeamError::Format(format!("bad header column {h:?}")))?;
            vars.push(v);
        }
        if vars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TeamError::Format(
                "header variables must be strictly ascending".into(),
            ));
        }
        let domain = IndexSet(vars);
        domain.guard(MAX_TEAM_VARS)?;
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| TeamError::Format(e.to_string()))?;
            let row = rec
                .iter()
                .map(|c| match c {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    _ => Err(TeamError::Format(format!("cell {c:?} is not 0 or 1"))),
                })
                .collect::<Result<Vec<bool>, _>>()?;
            rows.push(row);
        }
        Team::from_rows(domain, &rows)
    }

    /// Write the CSV team format, members in canonical order.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = self.domain.vars().iter().map(|v| format!("p{v}")).collect();
        let mut out = header.join(",");
        out.push('\n');
        for s in self.members() {
            let cells: Vec<&str> = s
                .bits()
                .iter()
                .map(|b| if *b { "1" } else { "0" })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn mask_members(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// All submasks of `mask` in ascending numeric order.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    // Walk the submasks upward: next = ((cur | !mask) + 1) & mask.
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(cur)
    })
}

/// Every team on `n` in canonical order, guarded by `limit` on `|n|`.
pub fn all_teams_bounded(
    n: &IndexSet,
    limit: usize,
) -> Result<impl Iterator<Item = Team>, TeamError> {
    n.guard(limit.min(MAX_TEAM_VARS))?;
    let domain = n.clone();
    Ok(submasks(n.full_mask()).map(move |m| Team {
        domain: domain.clone(),
        mask: m,
    }))
}

/// Every team on `n` in canonical order (`|n| ≤ 4`).
pub fn all_teams(n: &IndexSet) -> Result<impl Iterator<Item = Team>, TeamError> {
    all_teams_bounded(n, DEFAULT_TEAM_GUARD)
}

/// A set of teams over a common domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TeamFamily {
    domain: IndexSet,
    masks: BTreeSet<u64>,
}

impl TeamFamily {
    pub fn new(
        domain: IndexSet,
        teams: impl IntoIterator<Item = Team>,
    ) -> Result<TeamFamily, TeamError> {
        let mut masks = BTreeSet::new();
        for t in teams {
            if t.domain != domain {
                return Err(TeamError::BadDomain(format!(
                    "team on {} in a family on {domain}",
                    t.domain
                )));
            }
            masks.insert(t.mask);
        }
        Ok(TeamFamily { domain, masks })
    }

    pub fn from_masks(
        domain: IndexSet,
        masks: impl IntoIterator<Item = u64>,
    ) -> Result<TeamFamily, TeamError> {
        domain.guard(MAX_TEAM_VARS)?;
        let full = domain.full_mask();
        let masks: BTreeSet<u64> = masks.into_iter().collect();
        if masks.iter().any(|m| m & !full != 0) {
            return Err(TeamError::BadDomain(format!(
                "team mask outside the valuations of {domain}"
            )));
        }
        Ok(TeamFamily { domain, masks })
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    /// Team bitmasks in canonical order.
    pub fn masks(&self) -> &BTreeSet<u64> {
        &self.masks
    }

    pub fn teams(&self) -> Vec<Team> {
        self.masks
            .iter()
            .map(|m| Team {
                domain: self.domain.clone(),
                mask: *m,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn contains(&self, t: &Team) -> bool {
        t.domain == self.domain && self.masks.contains(&t.mask)
    }

    /// The ⊆-maximal members, in canonical order.
    pub fn maximal_masks(&self) -> Vec<u64> {
        self.masks
            .iter()
            .copied()
            .filter(|m| !self.masks.iter().any(|o| o != m && m & !o == 0))
            .collect()
    }

    /// Read the JSON family format.
    pub fn from_json(text: &str) -> Result<TeamFamily, TeamError> {
        let doc: FamilyFile =
            serde_json::from_str(text).map_err(|e| TeamError::Format(e.to_string()))?;
        if doc.vars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TeamError::Format(
                "\"vars\" must be strictly ascending".into(),
            ));
        }
        let domain = IndexSet(doc.vars);
        domain.guard(MAX_TEAM_VARS)?;
        let mut teams = Vec::new();
        for members in doc.teams {
            let mut rows = Vec::new();
            for bits in members {
                let row = bits
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(TeamError::Format(format!(
                            "bad valuation bitstring {bits:?}"
                        ))),
                    })
                    .collect::<Result<Vec<bool>, _>>()?;
                rows.push(row);
            }
            teams.push(Team::from_rows(domain.clone(), &rows)?);
        }
        TeamFamily::new(domain, teams)
    }

    /// Write the JSON family format, teams and members in canonical order.
    pub fn to_json(&self) -> String {
        let doc = FamilyFile {
            vars: self.domain.0.clone(),
            teams: self
                .teams()
                .iter()
                .map(|t| t.members().iter().map(Valuation::bitstring).collect())
                .collect(),
        };
        serde_json::to_string(&doc).expect("family serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyFile {
    vars: Vec<VarId>,
    teams: Vec<Vec<String>>,
}

/// True iff `k` is nonempty and closed under subteams.
pub fn is_downward_closed(k: &TeamFamily) -> bool {
    !k.masks.is_empty()
        && k.masks
            .iter()
            .all(|m| submasks(*m).all(|sub| k.masks.contains(&sub)))
}

/// Every nonempty downward closed family on `n` (`|n| ≤ 2`), ordered by
/// the sorted list of member masks.
pub fn downward_closed_families(n: &IndexSet) -> Result<Vec<TeamFamily>, TeamError> {
    n.guard(DEFAULT_FAMILY_GUARD)?;
    let teams: Vec<u64> = submasks(n.full_mask()).collect();
    let mut out = Vec::new();
    // Decide membership team by team in ascending mask order. Every proper
    // subteam has a smaller mask, so closure can be checked on the fly.
    fn go(teams: &[u64], i: usize, chosen: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == teams.len() {
            out.push(chosen.clone());
            return;
        }
        let t = teams[i];
        go(teams, i + 1, chosen, out);
        let closed = (0..usize::BITS as u64).all(|b| {
            if t >> b & 1 == 0 {
                return true;
            }
            chosen.contains(&(t & !(1 << b)))
        });
        if closed && (t == 0 || chosen.contains(&0)) {
            chosen.push(t);
            go(teams, i + 1, chosen, out);
            chosen.pop();
        }
    }
    let mut raw = Vec::new();
    go(&teams, 0, &mut Vec::new(), &mut raw);
    raw.retain(|f| !f.is_empty());
    raw.sort();
    for f in raw {
        out.push(TeamFamily {
            domain: n.clone(),
            masks: f.into_iter().collect(),
        });
    }
    Ok(out)
}
