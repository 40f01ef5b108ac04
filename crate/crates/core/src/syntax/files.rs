//! Parsers for the two on-disk formats: game descriptions and strategy
//! profiles.
//!
//! A game file has one `k:` line, one `player NAME controls v1, v2, ...`
//! line per player, and one `payoff NAME: formula` and `goal NAME: formula`
//! line per player, in any order. A profile file has one
//! `PLAYER var1=val1,var2=val2 probability` line per supported strategy;
//! omitted strategies get probability zero. In both formats blank lines
//! are skipped and `#` starts a comment line.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::expectation::{validate_profile, MixedStrategy, Profile};
use crate::formula::{Formula, Valuation};
use crate::game::{Game, Subject};
use crate::modal::ModalFormula;
use crate::rational::{parse_rational, Rational};
use crate::scale::LkScale;
use crate::syntax::diag::Diagnostic;
use crate::syntax::parse::{parse_formula, parse_modal_formula};

fn lines_with_spans(text: &str) -> Vec<(Range<usize>, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for line in text.split('\n') {
        out.push((start..start + line.len(), line));
        start += line.len() + 1;
    }
    out
}

/// The trimmed content of a line together with its span in the file.
fn trimmed_span(span: &Range<usize>, line: &str) -> (Range<usize>, String) {
    let trimmed = line.trim();
    let lead = line.len() - line.trim_start().len();
    let start = span.start + lead;
    (start..start + trimmed.len(), trimmed.to_string())
}

struct FormulaEntry {
    name: String,
    name_span: Range<usize>,
    text: String,
    base: usize,
    line_span: Range<usize>,
}

pub fn parse_game_file(text: &str) -> Result<Game, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut k: Option<(u32, Range<usize>)> = None;
    let mut players: Vec<String> = Vec::new();
    let mut player_spans: Vec<Range<usize>> = Vec::new();
    let mut controls: Vec<Vec<String>> = Vec::new();
    let mut variables: Vec<String> = Vec::new();
    let mut payoff_entries: Vec<FormulaEntry> = Vec::new();
    let mut goal_entries: Vec<FormulaEntry> = Vec::new();

    for (raw_span, raw_line) in lines_with_spans(text) {
        let (span, line) = trimmed_span(&raw_span, raw_line);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("k:") {
            match rest.trim().parse::<u32>() {
                Ok(0) => diags.push(Diagnostic::error(
                    span.clone(),
                    "k must be at least 1; the scale needs the endpoints 0 and 1",
                )),
                Ok(value) => {
                    if k.is_some() {
                        diags.push(Diagnostic::error(span.clone(), "duplicate `k:` line"));
                    } else {
                        k = Some((value, span.clone()));
                    }
                }
                Err(_) => diags.push(Diagnostic::error(
                    span.clone(),
                    format!("`{}` is not a positive integer", rest.trim()),
                )),
            }
        } else if let Some(rest) = line.strip_prefix("player ") {
            let Some((name, vars)) = rest.split_once(" controls ") else {
                diags.push(Diagnostic::error(
                    span.clone(),
                    "expected `player NAME controls v1, v2, ...`",
                ));
                continue;
            };
            let name = name.trim();
            if name.is_empty() || name.split_whitespace().count() != 1 {
                diags.push(Diagnostic::error(
                    span.clone(),
                    "player name must be a single word",
                ));
                continue;
            }
            let mut block = Vec::new();
            for var in vars.split(',') {
                let var = var.trim();
                if var.is_empty() {
                    diags.push(Diagnostic::error(
                        span.clone(),
                        "empty variable name in controls list",
                    ));
                    continue;
                }
                block.push(var.to_string());
                if !variables.contains(&var.to_string()) {
                    variables.push(var.to_string());
                }
            }
            players.push(name.to_string());
            player_spans.push(span.clone());
            controls.push(block);
        } else if let Some(rest) = line.strip_prefix("payoff ") {
            match formula_entry(rest, &span, "payoff") {
                Ok(entry) => payoff_entries.push(entry),
                Err(d) => diags.push(d),
            }
        } else if let Some(rest) = line.strip_prefix("goal ") {
            match formula_entry(rest, &span, "goal") {
                Ok(entry) => goal_entries.push(entry),
                Err(d) => diags.push(d),
            }
        } else {
            diags.push(Diagnostic::error(
                span.clone(),
                "unrecognized line; expected `k:`, `player`, `payoff`, or `goal`",
            ));
        }
    }

    if k.is_none() {
        diags.push(Diagnostic::error(0..0, "missing `k:` line"));
    }
    if players.is_empty() {
        diags.push(Diagnostic::error(0..0, "no players declared"));
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let (k, k_span) = k.unwrap();

    let mut claimed_payoff = vec![false; players.len()];
    let mut payoffs: Vec<Option<(Formula, Range<usize>)>> = vec![None; players.len()];
    for entry in &payoff_entries {
        let Some(index) = players.iter().position(|p| *p == entry.name) else {
            diags.push(Diagnostic::error(
                entry.name_span.clone(),
                format!("payoff for unknown player `{}`", entry.name),
            ));
            continue;
        };
        if claimed_payoff[index] {
            diags.push(Diagnostic::error(
                entry.line_span.clone(),
                format!("duplicate payoff for `{}`", entry.name),
            ));
            continue;
        }
        claimed_payoff[index] = true;
        match parse_formula(&entry.text) {
            Ok(formula) => {
                let span = entry.base..entry.base + entry.text.len();
                payoffs[index] = Some((formula, span));
            }
            Err(errs) => diags.extend(errs.into_iter().map(|d| d.offset(entry.base))),
        }
    }

    let mut claimed_goal = vec![false; players.len()];
    let mut goals: Vec<Option<(ModalFormula, Range<usize>)>> = vec![None; players.len()];
    for entry in &goal_entries {
        let Some(index) = players.iter().position(|p| *p == entry.name) else {
            diags.push(Diagnostic::error(
                entry.name_span.clone(),
                format!("goal for unknown player `{}`", entry.name),
            ));
            continue;
        };
        if claimed_goal[index] {
            diags.push(Diagnostic::error(
                entry.line_span.clone(),
                format!("duplicate goal for `{}`", entry.name),
            ));
            continue;
        }
        claimed_goal[index] = true;
        match parse_modal_formula(&entry.text, &players) {
            Ok(goal) => {
                let span = entry.base..entry.base + entry.text.len();
                goals[index] = Some((goal, span));
            }
            Err(errs) => diags.extend(errs.into_iter().map(|d| d.offset(entry.base))),
        }
    }

    for (i, name) in players.iter().enumerate() {
        if !claimed_payoff[i] {
            diags.push(Diagnostic::error(
                player_spans[i].clone(),
                format!("player `{name}` has no payoff"),
            ));
        }
        if !claimed_goal[i] {
            diags.push(Diagnostic::error(
                player_spans[i].clone(),
                format!("player `{name}` has no goal"),
            ));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let payoff_spans: Vec<Range<usize>> = payoffs
        .iter()
        .map(|p| p.as_ref().unwrap().1.clone())
        .collect();
    let goal_spans: Vec<Range<usize>> = goals
        .iter()
        .map(|g| g.as_ref().unwrap().1.clone())
        .collect();
    let game = Game::new(
        LkScale::new(k),
        players,
        variables,
        controls,
        payoffs.into_iter().map(|p| p.unwrap().0).collect(),
        goals.into_iter().map(|g| g.unwrap().0).collect(),
    );

    for violation in game.validate() {
        let span = match violation.subject {
            Subject::Game => k_span.clone(),
            Subject::Player(i) => player_spans[i].clone(),
            Subject::Payoff(i) => payoff_spans[i].clone(),
            Subject::Goal(i) => goal_spans[i].clone(),
        };
        diags.push(Diagnostic::error(span, violation.message));
    }
    if diags.is_empty() {
        Ok(game)
    } else {
        Err(diags)
    }
}

fn formula_entry(
    rest: &str,
    line_span: &Range<usize>,
    kind: &str,
) -> Result<FormulaEntry, Diagnostic> {
    let Some(colon) = rest.find(':') else {
        return Err(Diagnostic::error(
            line_span.clone(),
            format!("expected `{kind} NAME: formula`"),
        ));
    };
    let name = rest[..colon].trim();
    if name.is_empty() {
        return Err(Diagnostic::error(
            line_span.clone(),
            format!("expected `{kind} NAME: formula`"),
        ));
    }
    let name_offset = rest[..colon].len() - rest[..colon].trim_start().len();
    let name_start = line_span.end - rest.len() + name_offset;
    Ok(FormulaEntry {
        name: name.to_string(),
        name_span: name_start..name_start + name.len(),
        text: rest[colon + 1..].to_string(),
        base: line_span.end - rest.len() + colon + 1,
        line_span: line_span.clone(),
    })
}

/// Splits a line into whitespace-separated fields with their spans.
fn fields_with_spans(span: &Range<usize>, line: &str) -> Vec<(Range<usize>, String)> {
    let mut out = Vec::new();
    let bytes = line.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        if bytes[pos].is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        out.push((
            span.start + start..span.start + pos,
            line[start..pos].to_string(),
        ));
    }
    out
}

pub fn parse_profile_file(text: &str, game: &Game) -> Result<Profile, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut entries: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); game.num_players()];
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut player_line: Vec<Option<Range<usize>>> = vec![None; game.num_players()];

    for (raw_span, raw_line) in lines_with_spans(text) {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = fields_with_spans(&raw_span, raw_line);
        if fields.len() != 3 {
            diags.push(Diagnostic::error(
                fields
                    .first()
                    .map(|(s, _)| s.start..fields.last().unwrap().0.end)
                    .unwrap_or(raw_span.clone()),
                "expected `PLAYER var1=val1,var2=val2 probability`",
            ));
            continue;
        }
        let (name_span, name) = &fields[0];
        let Some(player) = game.player_index(name) else {
            diags.push(Diagnostic::error(
                name_span.clone(),
                format!("unknown player `{name}`"),
            ));
            continue;
        };
        if player_line[player].is_none() {
            player_line[player] = Some(name_span.clone());
        }

        let (assign_span, assign) = &fields[1];
        let Some(assignment) = parse_assignment(assign, assign_span, &mut diags) else {
            continue;
        };
        let Some(strategy) = game.strategy_index(player, &assignment) else {
            diagnose_assignment(game, player, &assignment, assign_span, &mut diags);
            continue;
        };

        let (prob_span, prob) = &fields[2];
        let prob = match parse_rational(prob) {
            Some(p) => p,
            None => {
                diags.push(Diagnostic::error(
                    prob_span.clone(),
                    format!("`{prob}` is not a rational number"),
                ));
                continue;
            }
        };
        if !seen.insert((player, strategy)) {
            diags.push(Diagnostic::error(
                assign_span.clone(),
                format!("duplicate entry for this strategy of `{name}`"),
            ));
            continue;
        }
        entries[player].push((strategy, prob));
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let profile = Profile::new(
        entries
            .into_iter()
            .enumerate()
            .map(|(i, list)| MixedStrategy::new(i, list))
            .collect(),
    );
    for violation in validate_profile(game, &profile) {
        let span = match violation.subject {
            Subject::Player(i) => player_line[i].clone().unwrap_or(0..0),
            _ => 0..0,
        };
        diags.push(Diagnostic::error(span, violation.message));
    }
    if diags.is_empty() {
        Ok(profile)
    } else {
        Err(diags)
    }
}

fn parse_assignment(
    field: &str,
    span: &Range<usize>,
    diags: &mut Vec<Diagnostic>,
) -> Option<Valuation> {
    let mut assignment = Valuation::new();
    let mut names = BTreeSet::new();
    let mut pos = 0;
    for pair in field.split(',') {
        let pair_span = span.start + pos..span.start + pos + pair.len();
        pos += pair.len() + 1;
        let Some((var, val)) = pair.split_once('=') else {
            diags.push(Diagnostic::error(
                pair_span,
                format!("expected `var=value`, found `{pair}`"),
            ));
            return None;
        };
        let Some(value) = parse_rational(val) else {
            diags.push(Diagnostic::error(
                pair_span,
                format!("`{val}` is not a rational number"),
            ));
            return None;
        };
        if !names.insert(var.to_string()) {
            diags.push(Diagnostic::error(
                pair_span,
                format!("variable `{var}` assigned twice"),
            ));
            return None;
        }
        assignment.set(var, value);
    }
    Some(assignment)
}

/// Explains why `strategy_index` rejected an assignment.
fn diagnose_assignment(
    game: &Game,
    player: usize,
    assignment: &Valuation,
    span: &Range<usize>,
    diags: &mut Vec<Diagnostic>,
) {
    let name = &game.players()[player];
    let block = game.controls(player);
    for (var, value) in assignment.iter() {
        if !block.iter().any(|b| b.as_str() == var) {
            diags.push(Diagnostic::error(
                span.clone(),
                format!("variable `{var}` is not controlled by `{name}`"),
            ));
            return;
        }
        if !game.scale().contains(value) {
            diags.push(Diagnostic::error(
                span.clone(),
                format!(
                    "value {value} for `{var}` is not a truth value of {}",
                    game.scale()
                ),
            ));
            return;
        }
    }
    diags.push(Diagnostic::error(
        span.clone(),
        format!(
            "assignment must set exactly the variables controlled by `{name}` ({})",
            block.join(", ")
        ),
    ));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat};

    const MATCHING: &str = "\
# two players try to match or mismatch each other
k: 1
player P1 controls p1
player P2 controls p2

payoff P1: p1
payoff P2: p2
goal P1: ~ d(E[P1], E[P2])
goal P2: d(E[P1], E[P2])
";

    #[test]
    fn a_complete_game_file_parses() {
        let game = parse_game_file(MATCHING).unwrap();
        assert_eq!(game.players(), ["P1", "P2"]);
        assert_eq!(game.variables(), ["p1", "p2"]);
        assert_eq!(game.scale().k(), 1);
        assert_eq!(*game.payoff_formula(1), Formula::var("p2"));
        assert_eq!(
            *game.goal_formula(0),
            ModalFormula::not(ModalFormula::distance(
                ModalFormula::atom(0),
                ModalFormula::atom(1)
            ))
        );
    }

    #[test]
    fn section_order_does_not_matter() {
        let shuffled = "\
goal P1: E[P1]
payoff P1: p1 /\\ p2
k: 2
player P1 controls p1, p2
";
        let game = parse_game_file(shuffled).unwrap();
        assert_eq!(game.scale().k(), 2);
        assert_eq!(game.controls(0), ["p1", "p2"]);
    }

    #[test]
    fn missing_sections_are_reported() {
        let errs = parse_game_file("payoff P1: p1\n").unwrap_err();
        let messages: Vec<_> = errs.iter().map(|d| d.message.as_str()).collect();
        assert!(messages.contains(&"missing `k:` line"));
        assert!(messages.contains(&"no players declared"));

        let errs = parse_game_file("k: 1\nplayer P1 controls p1\npayoff P1: p1\n").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].message, "player `P1` has no goal");
    }

    #[test]
    fn bad_k_lines_are_reported() {
        let errs = parse_game_file("k: 0\nplayer P1 controls p1\npayoff P1: p1\ngoal P1: E[P1]\n")
            .unwrap_err();
        assert!(errs[0].message.contains("k must be at least 1"));

        let errs = parse_game_file("k: x\nplayer P1 controls p1\npayoff P1: p1\ngoal P1: E[P1]\n")
            .unwrap_err();
        assert!(errs[0].message.contains("not a positive integer"));

        let errs =
            parse_game_file("k: 1\nk: 2\nplayer P1 controls p1\npayoff P1: p1\ngoal P1: E[P1]\n")
                .unwrap_err();
        assert_eq!(errs[0].message, "duplicate `k:` line");
    }

    #[test]
    fn unknown_names_and_duplicates_are_reported() {
        let text = "\
k: 1
player P1 controls p1
payoff P1: p1
payoff P2: p1
goal P1: E[P1]
";
        let errs = parse_game_file(text).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].message, "payoff for unknown player `P2`");

        let text = "\
k: 1
player P1 controls p1
payoff P1: p1
payoff P1: ~p1
goal P1: E[P1]
";
        let errs = parse_game_file(text).unwrap_err();
        assert_eq!(errs[0].message, "duplicate payoff for `P1`");
    }

    #[test]
    fn formula_errors_point_into_the_file() {
        let text = "k: 1\nplayer P1 controls p1\npayoff P1: p1 &\ngoal P1: E[P1]\n";
        let errs = parse_game_file(text).unwrap_err();
        assert_eq!(errs.len(), 1);
        let rendered = errs[0].render(text);
        assert!(rendered.contains("line 3"), "{rendered}");

        let text = "k: 1\nplayer P1 controls p1\npayoff P1: p1\ngoal P1: E[P9]\n";
        let errs = parse_game_file(text).unwrap_err();
        assert_eq!(errs[0].message, "unknown player `P9`");
        assert!(errs[0].render(text).contains("line 4"));
    }

    #[test]
    fn structural_violations_map_to_declaration_lines() {
        let text = "\
k: 1
player P1 controls p1
player P2 controls p1
payoff P1: p1
payoff P2: p1
goal P1: E[P1]
goal P2: E[P2]
";
        let errs = parse_game_file(text).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("controlled by both"));
        assert!(
            errs[0].render(text).contains("line 3"),
            "{}",
            errs[0].render(text)
        );
    }

    #[test]
    fn unrecognized_lines_are_flagged() {
        let errs = parse_game_file("k: 1\nwinner P1\n").unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("unrecognized line")));
    }

    #[test]
    fn a_profile_file_parses_to_the_expected_distribution() {
        let game = parse_game_file(MATCHING).unwrap();
        let text = "\
# uniform play for P1, point mass for P2
P1 p1=0 1/2
P1 p1=1 1/2
P2 p2=1 1
";
        let profile = parse_profile_file(text, &game).unwrap();
        assert_eq!(profile.strategies()[0].prob(0), rat(1, 2));
        assert_eq!(profile.strategies()[0].prob(1), rat(1, 2));
        assert_eq!(profile.strategies()[1].prob(0), rat(0, 1));
        assert_eq!(profile.strategies()[1].prob(1), one());
    }

    #[test]
    fn profile_lines_must_have_three_fields() {
        let game = parse_game_file(MATCHING).unwrap();
        let errs = parse_profile_file("P1 p1=0\nP2 p2=1 1\n", &game).unwrap_err();
        assert!(errs[0].message.contains("expected `PLAYER"));
    }

    #[test]
    fn profile_name_and_value_errors_are_specific() {
        let game = parse_game_file(MATCHING).unwrap();

        let errs = parse_profile_file("P9 p1=0 1\n", &game).unwrap_err();
        assert_eq!(errs[0].message, "unknown player `P9`");

        let errs = parse_profile_file("P1 p2=0 1\nP2 p2=1 1\n", &game).unwrap_err();
        assert_eq!(errs[0].message, "variable `p2` is not controlled by `P1`");

        let errs = parse_profile_file("P1 p1=1/3 1\nP2 p2=1 1\n", &game).unwrap_err();
        assert!(errs[0].message.contains("not a truth value"));

        let errs = parse_profile_file("P1 p1 1\nP2 p2=1 1\n", &game).unwrap_err();
        assert!(errs[0].message.contains("expected `var=value`"));

        let errs = parse_profile_file("P1 p1=0 nope\nP2 p2=1 1\n", &game).unwrap_err();
        assert_eq!(errs[0].message, "`nope` is not a rational number");

        let errs = parse_profile_file("P1 p1=0 1/2\nP1 p1=0 1/2\nP2 p2=1 1\n", &game).unwrap_err();
        assert!(errs[0].message.contains("duplicate entry"));
    }

    #[test]
    fn distribution_violations_surface_as_diagnostics() {
        let game = parse_game_file(MATCHING).unwrap();

        let errs = parse_profile_file("P1 p1=0 1/2\nP2 p2=1 1\n", &game).unwrap_err();
        assert!(errs[0].message.contains("sum to 1/2"));

        let errs = parse_profile_file("P1 p1=0 3/2\nP1 p1=1 -1/2\nP2 p2=1 1\n", &game).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("negative")));
    }

    #[test]
    fn omitted_players_are_reported_with_a_usable_span() {
        let game = parse_game_file(MATCHING).unwrap();
        let errs = parse_profile_file("P1 p1=0 1\n", &game).unwrap_err();
        assert!(errs[0].message.contains("sum to 0"));
    }

    #[test]
    fn multi_variable_assignments_resolve_in_any_order() {
        let text = "\
k: 1
player P1 controls a, b
payoff P1: a & b
goal P1: E[P1]
";
        let game = parse_game_file(text).unwrap();
        let profile = parse_profile_file("P1 b=1,a=0 1\n", &game).unwrap();
        assert_eq!(profile.strategies()[0].prob(1), one());

        let errs = parse_profile_file("P1 a=0 1\n", &game).unwrap_err();
        assert!(errs[0].message.contains("exactly the variables"));

        let errs = parse_profile_file("P1 a=0,a=1 1\n", &game).unwrap_err();
        assert!(errs[0].message.contains("assigned twice"));
    }
}
