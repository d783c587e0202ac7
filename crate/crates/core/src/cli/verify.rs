//! Reference tables and the `verify` command.

use std::collections::BTreeSet;

use crate::exact::{q, ExactError, RankStrategy};
use crate::graphkit::ParityContext;
use crate::homology::HomologyError;

use super::{compute_blocks, BlockSpec, Cache, TwistSpec};

/// `(g, h, degree, dim)` of a nonzero homology row.
type Row = (usize, Option<usize>, i64, usize);

struct Check {
    name: String,
    /// Where the expected numbers come from.
    source: &'static str,
    blocks: Vec<BlockSpec>,
    expected: BTreeSet<Row>,
    /// Only degrees in this window are compared, and they must be complete.
    window: Option<(i64, i64)>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub lines: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub sign_failure: bool,
}

fn gc_checks(quick: bool) -> Vec<Check> {
    let top = if quick { 4 } else { 5 };
    let mut out = Vec::new();
    let table: [(i64, &[Row]); 2] = [
        (2, &[(3, None, 0, 1), (5, None, 0, 1)]),
        (
            3,
            &[
                (2, None, 3, 1),
                (3, None, 3, 1),
                (4, None, 3, 1),
                (5, None, 3, 2),
            ],
        ),
    ];
    for (n, rows) in table {
        out.push(Check {
            name: format!("GC_{n} loop orders 2..{top}"),
            source: "low loop order homology of GC_n",
            blocks: (2..=top)
                .map(|g| BlockSpec::gc(ParityContext::gc(n), g, None))
                .collect(),
            expected: rows.iter().copied().filter(|r| r.0 <= top).collect(),
            window: None,
        });
    }
    let one_loop: [(i64, &[usize]); 2] = [(2, &[1, 5, 9]), (3, &[3, 7])];
    for (n, rs) in one_loop.iter().take(if quick { 1 } else { 2 }) {
        let n = *n;
        out.push(Check {
            name: format!("GC2_{n} one loop, up to 9 vertices"),
            source: "one-loop classes of GC2_n: loop graphs with r = 2n+1 mod 4 vertices",
            blocks: vec![BlockSpec::gc(
                ParityContext::gc2(n),
                1,
                Some((n - 10, n - 1)),
            )],
            expected: rs.iter().map(|&r| (1, None, n - r as i64, 1)).collect(),
            window: Some((n - 9, n - 1)),
        });
    }
    out
}

fn hgc_checks(quick: bool) -> Vec<Check> {
    let mut out = Vec::new();
    let zero_loop: [((i64, i64), Row); 3] = [
        ((2, 4), (0, Some(1), 1, 1)),
        ((2, 5), (0, Some(3), 3, 1)),
        ((3, 4), (0, Some(3), -1, 1)),
    ];
    for ((m, n), row) in zero_loop {
        out.push(Check {
            name: format!("HGC_{{{m},{n}}} loop order 0, hairs 1..7"),
            source: "loop order 0: the segment if m = n mod 2, else the tripod in degree 2(n-m)-3",
            blocks: (1..=7)
                .map(|h| BlockSpec::hgc(ParityContext::hgc(m, n), 0, h, None))
                .collect(),
            expected: [row].into(),
            window: None,
        });
    }
    let hmax = if quick { 5 } else { 7 };
    let one_loop: [((i64, i64), &[usize]); 4] = [
        ((2, 4), &[1, 3, 5, 7]),
        ((3, 5), &[2, 4, 6]),
        ((2, 5), &[3, 7]),
        ((3, 4), &[1, 5]),
    ];
    for ((m, n), hs) in one_loop {
        out.push(Check {
            name: format!("HGC_{{{m},{n}}} loop order 1, hairs 1..{hmax}"),
            source: "loop order 1: hedgehogs H_k in degree k(n-m-2)+m",
            blocks: (1..=hmax)
                .map(|h| BlockSpec::hgc(ParityContext::hgc(m, n), 1, h, None))
                .collect(),
            expected: hs
                .iter()
                .filter(|&&h| h <= hmax)
                .map(|&h| (1, Some(h), h as i64 * (n - m - 2) + m, 1))
                .collect(),
            window: None,
        });
    }
    if !quick {
        let two_loop: [((i64, i64), usize, &[(i64, usize)]); 2] = [
            ((2, 4), 8, &[(3, 6), (3, 8), (4, 7)]),
            ((2, 5), 4, &[(6, 1), (7, 3)]),
        ];
        for ((m, n), hmax, cells) in two_loop {
            out.push(Check {
                name: format!("HGC_{{{m},{n}}} loop order 2, hairs 1..{hmax}"),
                source: "two-loop generating function with T = s^(n-m-2) t",
                blocks: (1..=hmax)
                    .map(|h| BlockSpec::hgc(ParityContext::hgc(m, n), 2, h, None))
                    .collect(),
                expected: cells.iter().map(|&(j, k)| (2, Some(k), j, 1)).collect(),
                window: None,
            });
        }
    }
    out.push(Check {
        name: "HGC_{2,3} loop order 0 twisted by the tripod series, hairs 1..7".into(),
        source: "twisted loop order 0 part is spanned by the tripod class",
        blocks: vec![BlockSpec::twisted(
            ParityContext::hgc(2, 3),
            0,
            7,
            None,
            TwistSpec::Tripod(q(1)),
        )],
        expected: [(0, Some(7), -1, 1)].into(),
        window: None,
    });
    out
}

/// Runs every reference check, reading and filling the cache.
pub fn run_verify(quick: bool, cache: Option<&Cache>, strategy: &RankStrategy) -> VerifyReport {
    let mut report = VerifyReport::default();
    let mut checks = gc_checks(quick);
    checks.extend(hgc_checks(quick));
    for c in checks {
        let results = compute_blocks(&c.blocks, cache, strategy);
        let mut got = BTreeSet::new();
        let mut problems = Vec::new();
        for (spec, r) in c.blocks.iter().zip(results) {
            match r {
                Err(e) => {
                    if matches!(
                        e,
                        HomologyError::Exact(ExactError::CompositionNonzero { .. })
                    ) {
                        report.sign_failure = true;
                    }
                    problems.push(format!("block [{}]: {e}", spec.describe()));
                }
                Ok((t, _)) => {
                    for row in t.rows {
                        if c.window
                            .is_some_and(|(lo, hi)| row.degree < lo || row.degree > hi)
                        {
                            continue;
                        }
                        if !row.complete {
                            problems.push(format!(
                                "block [{}]: degree {} is not complete",
                                spec.describe(),
                                row.degree
                            ));
                        }
                        if row.dim > 0 {
                            got.insert(((row.g, row.h, row.degree, row.dim), spec.describe()));
                        }
                    }
                }
            }
        }
        let got_rows: BTreeSet<Row> = got.iter().map(|(r, _)| *r).collect();
        for (r, block) in &got {
            if !c.expected.contains(r) {
                problems.push(format!(
                    "block [{block}]: unexpected dim {} in degree {}",
                    r.3, r.2
                ));
            }
        }
        for r in &c.expected {
            if !got_rows.contains(r) {
                problems.push(format!(
                    "missing dim {} in degree {} (g={}, h={:?})",
                    r.3, r.2, r.0, r.1
                ));
            }
        }
        if problems.is_empty() {
            report.passed += 1;
            report.lines.push(format!("PASS {} [{}]", c.name, c.source));
        } else {
            report.failed += 1;
            report.lines.push(format!("FAIL {} [{}]", c.name, c.source));
            for p in problems {
                report.lines.push(format!("    {p}"));
            }
        }
    }
    report
}
