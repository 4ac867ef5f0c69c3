//! Three-generator presentations and the preset catalog.

use std::fmt;
use std::str::FromStr;

use crate::error::PresentationError;
use crate::expr::{parse_relator, RelatorExpr};
use crate::word::{Generator, Word};

/// Symbolic origin of a preset presentation, e.g. `G3(12)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyTag {
    pub name: String,
    pub params: Vec<u32>,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for FamilyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, rest) = match s.find('(') {
            Some(i) => (&s[..i], &s[i + 1..]),
            None => return Ok(FamilyTag { name: s.to_string(), params: vec![] }),
        };
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("missing ')' in family tag `{s}`"))?;
        let params = inner
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<u32>().map_err(|e| format!("bad parameter `{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FamilyTag { name: name.trim().to_string(), params })
    }
}

/// A presentation ⟨ρ0, ρ1, ρ2 | relators⟩. The involution relators ρi² are
/// always present.
#[derive(Clone, Debug)]
pub struct Presentation {
    exprs: Vec<RelatorExpr>,
    words: Vec<Word>,
    family: Option<FamilyTag>,
}

impl Presentation {
    /// Builds a presentation from relator expressions. Missing ρi² relators
    /// are prepended; relators that reduce to the empty word are rejected.
    pub fn new(
        exprs: Vec<RelatorExpr>,
        family: Option<FamilyTag>,
    ) -> Result<Presentation, PresentationError> {
        let mut all: Vec<RelatorExpr> = Vec::with_capacity(exprs.len() + 3);
        for g in Generator::ALL {
            let sq = RelatorExpr::Gen(g).pow(2);
            if !exprs.contains(&sq) {
                all.push(sq);
            }
        }
        all.extend(exprs);
        let mut words = Vec::with_capacity(all.len());
        for (i, e) in all.iter().enumerate() {
            let w = e.flatten().free_reduce();
            let is_square = matches!(e.as_power(), Some((RelatorExpr::Gen(_), 2)));
            if w.is_empty() && !is_square {
                return Err(PresentationError::EmptyRelator(i + 1));
            }
            words.push(if is_square { e.flatten() } else { w });
        }
        Ok(Presentation { exprs: all, words, family })
    }

    pub fn from_strs(relators: &[&str], family: Option<FamilyTag>) -> Result<Presentation, PresentationError> {
        let exprs = relators
            .iter()
            .enumerate()
            .map(|(i, r)| parse_relator(r).map_err(|source| PresentationError::Parse { line: i + 1, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(exprs, family)
    }

    /// Relator words. The involution relators appear as the unreduced `ρi ρi`;
    /// every other relator is freely reduced and nonempty.
    pub fn relators(&self) -> &[Word] {
        &self.words
    }

    pub fn exprs(&self) -> &[RelatorExpr] {
        &self.exprs
    }

    pub fn family(&self) -> Option<&FamilyTag> {
        self.family.as_ref()
    }

    /// Returns a copy with additional relators appended.
    pub fn with_relators(&self, extra: Vec<RelatorExpr>) -> Result<Presentation, PresentationError> {
        let mut exprs = self.exprs.clone();
        exprs.extend(extra);
        Presentation::new(exprs, self.family.clone())
    }

    /// Power relators `x^k` with k ≥ 2, read as claims that x has order
    /// exactly k.
    pub fn order_claims(&self) -> Vec<(Word, u64)> {
        self.exprs
            .iter()
            .filter_map(|e| e.as_power())
            .filter(|&(_, k)| k >= 2)
            .map(|(x, k)| (x.flatten().free_reduce(), k))
            .collect()
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        let w = w.free_reduce();
        self.words.iter().any(|r| r.free_reduce() == w)
    }

    /// One relator per line, preceded by a `# family:` header when tagged.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(tag) = &self.family {
            out.push_str(&format!("# family: {tag}\n"));
        }
        for e in &self.exprs {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Presentation, PresentationError> {
        let mut family = None;
        let mut exprs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(tag) = comment.trim().strip_prefix("family:") {
                    family = Some(tag.parse::<FamilyTag>().map_err(|reason| PresentationError::OutOfRange {
                        family: tag.trim().to_string(),
                        reason,
                    })?);
                }
                continue;
            }
            let e = parse_relator(line).map_err(|source| PresentationError::Parse { line: lineno + 1, source })?;
            exprs.push(e);
        }
        Presentation::new(exprs, family)
    }
}

/// Names accepted by [`preset`].
pub const FAMILIES: &[&str] = &[
    "delta",
    "dihedral",
    "c2xd",
    "thm32_case1",
    "thm32_case2",
    "thm32_case3",
    "prop28_L",
    "G1",
    "G2",
    "G3",
    "G4",
    "G5",
    "G6",
    "H1",
    "H2",
    "H3",
    "H4",
    "H5",
    "H6",
];

fn p2(e: u32) -> u64 {
    1u64 << e
}

fn range_err(family: &str, reason: impl Into<String>) -> PresentationError {
    PresentationError::OutOfRange { family: family.to_string(), reason: reason.into() }
}

fn want_params(family: &str, params: &[u32], n: usize) -> Result<(), PresentationError> {
    if params.len() != n {
        return Err(range_err(family, format!("expected {n} parameter(s), got {}", params.len())));
    }
    Ok(())
}

/// Builds the relator list of a named family.
///
/// Parameters are `n` for single-parameter families, `(n, s, t)` for
/// `thm32_case1`/`thm32_case2` and `(n, t)` for `thm32_case3`. The ranges
/// accepted are the structural ones the relator formulas need (`2 ≤ s, t ≤ n-2`
/// and the case conditions on `s + t`); `n` itself may be smaller than the
/// smallest value for which the order of the group has been established, so
/// callers decide what a small-`n` result means.
pub fn preset(family: &str, params: &[u32]) -> Result<Presentation, PresentationError> {
    let tag = FamilyTag { name: family.to_string(), params: params.to_vec() };
    let base = ["r0^2", "r1^2", "r2^2", "(r0 r2)^2"].map(String::from);
    let rels: Vec<String> = match family {
        "delta" => {
            want_params(family, params, 0)?;
            base.to_vec()
        }
        "dihedral" => {
            want_params(family, params, 1)?;
            let n = params[0];
            if n < 3 {
                return Err(range_err(family, "need n >= 3"));
            }
            // D_{2^n}: ρ1, ρ2 generate, ρ0 is the central involution of ⟨ρ1ρ2⟩.
            let mut r = base.to_vec();
            r.push("(r0 r1)^2".into());
            r.push(format!("(r1 r2)^{}", p2(n - 1)));
            r.push(format!("r0 (r1 r2)^{}", p2(n - 2)));
            r
        }
        "c2xd" => {
            want_params(family, params, 1)?;
            let n = params[0];
            if n < 3 {
                return Err(range_err(family, "need n >= 3"));
            }
            let mut r = base.to_vec();
            r.push("(r0 r1)^2".into());
            r.push(format!("(r1 r2)^{}", p2(n - 2)));
            r
        }
        "thm32_case1" => {
            want_params(family, params, 3)?;
            let (n, s, t) = (params[0], params[1], params[2]);
            check_st(family, n, s, t)?;
            if s + t > n - 1 {
                return Err(range_err(family, "need s + t <= n - 1"));
            }
            let mut r = thm32_r1(s, t);
            let gap = n - s - t;
            if gap % 2 == 1 {
                r.push(format!("[(r0 r1)^2, r2]^{}", p2((gap - 1) / 2)));
            } else {
                r.push(format!("[(r0 r1)^2, (r1 r2)^2]^{}", p2((gap - 2) / 2)));
            }
            r
        }
        "thm32_case2" => {
            want_params(family, params, 3)?;
            let (n, s, t) = (params[0], params[1], params[2]);
            check_st(family, n, s, t)?;
            if s + t != n {
                return Err(range_err(family, "need s + t = n"));
            }
            let mut r = thm32_r2(s, t);
            r.push("[(r0 r1)^2, r2]".into());
            r.push(format!("(r0 r1)^{} (r1 r2)^{}", p2(s - 1), p2(t - 1)));
            r
        }
        "thm32_case3" => {
            want_params(family, params, 2)?;
            let (n, t) = (params[0], params[1]);
            check_st(family, n, t, t)?;
            if 2 * t <= n {
                return Err(range_err(family, "need s + t > n with s = t"));
            }
            let e = p2(n - t - 1);
            let mut r = thm32_r2(t, t);
            r.push(format!("(r0 r1)^{e} (r1 r2)^{e}"));
            r.push("[(r0 r1)^2, r2] (r2 r1)^4".into());
            r
        }
        "prop28_L" => {
            let n = single_n(family, params, 5)?;
            let mut r = base.to_vec();
            r.push("(r0 r1)^4".into());
            r.push(format!("(r1 r2)^{}", p2(n - 3)));
            r.push(format!("[(r0 r1)^2, r2] (r1 r2)^{}", p2(n - 4)));
            r
        }
        "G1" | "G2" => {
            let n = single_n(family, params, 5)?;
            let mut r = base.to_vec();
            r.push(format!("(r0 r1)^{}", p2(n - 2)));
            r.push(format!("(r1 r2)^{}", p2(n - 2)));
            if family == "G1" {
                r.push("(r0 r1)^2 (r1 r2)^2".into());
            } else {
                r.push(format!("(r0 r1)^2 (r1 r2)^2 (r1 r2)^{}", p2(n - 3)));
            }
            r
        }
        "G3" | "G4" | "G5" | "G6" => {
            let n = single_n(family, params, 6)?;
            let mut r = section4_r2(n);
            let q = p2(n - 4);
            match family {
                "G3" => {
                    r.push("(r0 r1)^4 (r1 r2)^4".into());
                    r.push("[(r0 r1)^2, r2] (r0 r1)^4".into());
                }
                "G4" => {
                    r.push("(r0 r1)^4 (r1 r2)^4".into());
                    r.push(format!("[(r0 r1)^2, r2] (r0 r1)^4 (r1 r2)^{q}"));
                }
                "G5" => {
                    r.push(format!("(r0 r1)^4 (r1 r2)^4 (r1 r2)^{q}"));
                    r.push(format!("[(r0 r1)^2, r2] (r0 r1)^4 (r1 r2)^{q}"));
                }
                _ => {
                    r.push(format!("(r0 r1)^4 (r1 r2)^4 (r1 r2)^{q}"));
                    r.push("[(r0 r1)^2, r2] (r0 r1)^4".into());
                }
            }
            r
        }
        "H1" => {
            let n = single_n(family, params, 5)?;
            let mut r = base.to_vec();
            r.push(format!("(r0 r1)^{}", p2(n - 2)));
            r.push(format!("(r1 r2)^{}", p2(n - 2)));
            r.push("(r0 r1)^2 (r1 r2)^2".into());
            r.push("[(r0 r1)^2, r2] (r2 r1)^4".into());
            r
        }
        "H2" => {
            let n = single_n(family, params, 5)?;
            let mut r = base.to_vec();
            r.push("(r0 r1)^4".into());
            r.push(format!("(r1 r2)^{}", p2(n - 2)));
            r.push(format!("(r0 r1)^2 (r1 r2)^{}", p2(n - 3)));
            r.push("[(r0 r1)^2, r2]".into());
            r
        }
        "H3" => {
            let n = single_n(family, params, 6)?;
            let mut r = base.to_vec();
            r.push(format!("(r0 r1)^{}", p2(n - 3)));
            r.push(format!("(r1 r2)^{}", p2(n - 3)));
            r.push("(r0 r1)^4 (r1 r2)^4".into());
            r.push("[(r0 r1)^2, r2] (r2 r1)^4".into());
            r
        }
        "H4" => {
            let n = single_n(family, params, 6)?;
            let mut r = base.to_vec();
            r.push("(r0 r1)^4".into());
            r.push(format!("(r1 r2)^{}", p2(n - 3)));
            r.push(format!("[(r0 r1)^2, r2] (r2 r1)^{}", p2(n - 4)));
            r
        }
        "H5" | "H6" => {
            let n = single_n(family, params, 6)?;
            let mut r = base.to_vec();
            r.push("(r0 r1)^8".into());
            r.push(format!("(r1 r2)^{}", p2(n - 3)));
            if family == "H5" {
                r.push("[(r0 r1)^2, r2]".into());
                r.push(format!("(r0 r1)^4 (r1 r2)^{}", p2(n - 4)));
            } else {
                r.push(format!("(r0 r1)^4 (r1 r2)^{}", p2(n - 4)));
                r.push("[(r0 r1)^2, r2] (r0 r1)^4".into());
            }
            r
        }
        other => return Err(PresentationError::UnknownFamily(other.to_string())),
    };
    let refs: Vec<&str> = rels.iter().map(String::as_str).collect();
    Presentation::from_strs(&refs, Some(tag))
}

/// Parses `NAME` or `NAME(p1,p2,...)` and builds the preset.
pub fn preset_from_spec(spec: &str) -> Result<Presentation, PresentationError> {
    let tag: FamilyTag = spec
        .parse()
        .map_err(|reason| PresentationError::OutOfRange { family: spec.to_string(), reason })?;
    preset(&tag.name, &tag.params)
}

fn single_n(family: &str, params: &[u32], min_n: u32) -> Result<u32, PresentationError> {
    want_params(family, params, 1)?;
    let n = params[0];
    if n < min_n {
        return Err(range_err(family, format!("need n >= {min_n}")));
    }
    if n > 30 {
        return Err(range_err(family, "n too large"));
    }
    Ok(n)
}

fn check_st(family: &str, n: u32, s: u32, t: u32) -> Result<(), PresentationError> {
    if n > 30 {
        return Err(range_err(family, "n too large"));
    }
    if n < 4 || s < 2 || t < 2 || s > n - 2 || t > n - 2 {
        return Err(range_err(family, "need 2 <= s, t <= n - 2"));
    }
    Ok(())
}

/// {ρi², (ρ0ρ1)^{2^s}, (ρ1ρ2)^{2^t}, (ρ0ρ2)², [(ρ0ρ1)⁴, ρ2], [ρ0, (ρ1ρ2)⁴]}
fn thm32_r1(s: u32, t: u32) -> Vec<String> {
    vec![
        "r0^2".into(),
        "r1^2".into(),
        "r2^2".into(),
        format!("(r0 r1)^{}", p2(s)),
        format!("(r1 r2)^{}", p2(t)),
        "(r0 r2)^2".into(),
        "[(r0 r1)^4, r2]".into(),
        "[r0, (r1 r2)^4]".into(),
    ]
}

/// {ρi², (ρ0ρ2)², (ρ0ρ1)^{2^s}, (ρ1ρ2)^{2^t}}
fn thm32_r2(s: u32, t: u32) -> Vec<String> {
    vec![
        "r0^2".into(),
        "r1^2".into(),
        "r2^2".into(),
        "(r0 r2)^2".into(),
        format!("(r0 r1)^{}", p2(s)),
        format!("(r1 r2)^{}", p2(t)),
    ]
}

fn section4_r2(n: u32) -> Vec<String> {
    thm32_r2(n - 3, n - 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(strs: &[&str]) -> Vec<Word> {
        strs.iter().map(|s| parse_relator(s).unwrap().flatten().free_reduce()).collect()
    }

    fn same_relators(p: &Presentation, expected: &[&str]) {
        let mut got: Vec<Word> = p.relators().iter().map(Word::free_reduce).collect();
        let mut want = words(expected);
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn g1_relators() {
        let p = preset("G1", &[12]).unwrap();
        same_relators(
            &p,
            &[
                "r0^2", "r1^2", "r2^2", "(r0 r2)^2", "(r0 r1)^1024", "(r1 r2)^1024",
                "(r0 r1)^2 (r1 r2)^2",
            ],
        );
        assert_eq!(p.family().unwrap().to_string(), "G1(12)");
    }

    #[test]
    fn delta_relators() {
        let p = preset("delta", &[]).unwrap();
        same_relators(&p, &["r0^2", "r1^2", "r2^2", "(r0 r2)^2"]);
    }

    #[test]
    fn dihedral_relators() {
        let p = preset("dihedral", &[4]).unwrap();
        same_relators(
            &p,
            &["r0^2", "r1^2", "r2^2", "(r0 r2)^2", "(r0 r1)^2", "(r1 r2)^8", "r0 (r1 r2)^4"],
        );
    }

    #[test]
    fn every_preset_contains_base_relators() {
        let cases: Vec<(&str, Vec<u32>)> = vec![
            ("delta", vec![]),
            ("dihedral", vec![6]),
            ("c2xd", vec![6]),
            ("thm32_case1", vec![12, 3, 4]),
            ("thm32_case1", vec![12, 3, 5]),
            ("thm32_case2", vec![12, 4, 8]),
            ("thm32_case3", vec![12, 8]),
            ("prop28_L", vec![10]),
        ];
        let mut all = cases;
        for f in ["G1", "G2", "G3", "G4", "G5", "G6", "H1", "H2", "H3", "H4", "H5", "H6"] {
            all.push((f, vec![12]));
        }
        let base = words(&["r0^2", "r1^2", "r2^2", "(r0 r2)^2"]);
        for (f, params) in all {
            let p = preset(f, &params).unwrap();
            for b in &base {
                assert!(
                    p.relators().iter().any(|r| r == b || r.free_reduce() == *b),
                    "{f}{params:?} missing {b}"
                );
            }
        }
    }

    #[test]
    fn case1_branch_follows_parity() {
        // n - s - t odd selects the [(ρ0ρ1)², ρ2] branch.
        let odd = preset("thm32_case1", &[12, 3, 4]).unwrap();
        assert!(odd.contains_word(&parse_relator("[(r0 r1)^2, r2]^4").unwrap().flatten()));
        let even = preset("thm32_case1", &[12, 3, 5]).unwrap();
        assert!(even.contains_word(&parse_relator("[(r0 r1)^2, (r1 r2)^2]^2").unwrap().flatten()));
        let even0 = preset("thm32_case1", &[12, 5, 5]).unwrap();
        assert!(even0.contains_word(&parse_relator("[(r0 r1)^2, (r1 r2)^2]").unwrap().flatten()));
    }

    #[test]
    fn out_of_range_and_unknown() {
        assert!(matches!(preset("G7", &[12]), Err(PresentationError::UnknownFamily(_))));
        assert!(matches!(preset("thm32_case1", &[12, 1, 4]), Err(PresentationError::OutOfRange { .. })));
        assert!(matches!(preset("thm32_case1", &[12, 6, 6]), Err(PresentationError::OutOfRange { .. })));
        assert!(matches!(preset("thm32_case2", &[12, 4, 7]), Err(PresentationError::OutOfRange { .. })));
        assert!(matches!(preset("thm32_case3", &[12, 6]), Err(PresentationError::OutOfRange { .. })));
        assert!(matches!(preset("G1", &[]), Err(PresentationError::OutOfRange { .. })));
    }

    #[test]
    fn text_format_round_trip() {
        let p = preset("G4", &[12]).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("# family: G4(12)\n"));
        let back = Presentation::from_text(&text).unwrap();
        assert_eq!(back.relators(), p.relators());
        assert_eq!(back.family(), p.family());
        assert_eq!(back.order_claims(), p.order_claims());
    }

    #[test]
    fn from_text_reports_line() {
        let err = Presentation::from_text("r0^2\n\n(r0 r1\n").unwrap_err();
        assert!(matches!(err, PresentationError::Parse { line: 3, .. }));
    }

    #[test]
    fn preset_spec_parsing() {
        let p = preset_from_spec("thm32_case2(12,4,8)").unwrap();
        assert_eq!(p.family().unwrap().params, vec![12, 4, 8]);
        assert!(preset_from_spec("delta").is_ok());
    }
}
