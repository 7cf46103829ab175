//! Sparse SDPA (.dat-s) export for external cross-checks, plus an
//! independent parser used to round-trip the exported text.
//!
//! The file encodes min c'x s.t. Σ_i x_i F_i − F_0 ⪰ 0 blockwise, with
//! free scalar variables x. Our problems map onto that form directly:
//! each PSD block expression contributes a matrix block, scalar
//! inequalities become entries of a diagonal block, and each equality
//! becomes a pair of opposing diagonal entries. A maximization objective
//! is exported negated, which the header comment records.

use super::{Lin, SdpProblem, Sense};
use crate::error::OpError;
use std::fmt::Write as _;

/// Parsed contents of a sparse SDPA file.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpaData {
    pub num_vars: usize,
    /// Negative sizes denote diagonal blocks, per the format.
    pub block_sizes: Vec<i64>,
    pub objective: Vec<f64>,
    /// (matrix index, block index, row, column, value); all 1-indexed,
    /// matrix 0 is F_0, row ≤ column.
    pub entries: Vec<(usize, usize, usize, usize, f64)>,
}

/// Renders a problem as sparse SDPA text.
pub fn export_sdpa(problem: &SdpProblem) -> String {
    let mut out = String::new();
    out.push_str("\"exported conic problem: min c'x s.t. sum_i x_i F_i - F0 >= 0\n");
    match problem.sense {
        Sense::Maximize => {
            out.push_str("\"objective sense: maximize; exported negated, flip the sign back\n")
        }
        Sense::Minimize => out.push_str("\"objective sense: minimize\n"),
    }
    out.push_str("\"equalities are encoded as opposing pairs of diagonal entries\n");

    let lp_rows = 2 * problem.equalities.len() + problem.nonneg.len();
    let mut block_sizes: Vec<i64> = problem.psd_blocks.iter().map(|b| b.dim as i64).collect();
    if lp_rows > 0 {
        block_sizes.push(-(lp_rows as i64));
    }
    writeln!(out, "{}", problem.num_scalars).unwrap();
    writeln!(out, "{}", block_sizes.len()).unwrap();
    let sizes: Vec<String> = block_sizes.iter().map(|s| s.to_string()).collect();
    writeln!(out, "{}", sizes.join(" ")).unwrap();

    let obj_sign = match problem.sense {
        Sense::Maximize => -1.0,
        Sense::Minimize => 1.0,
    };
    let mut c = vec![0.0; problem.num_scalars];
    for (var, coeff) in &problem.objective.terms {
        c[*var] = obj_sign * coeff;
    }
    let coeffs: Vec<String> = c.iter().map(|v| format!("{v}")).collect();
    writeln!(out, "{}", coeffs.join(" ")).unwrap();

    let push_expr = |out: &mut String, expr: &Lin, block: usize, i: usize, j: usize| {
        if expr.constant != 0.0 {
            writeln!(out, "0 {block} {i} {j} {}", -expr.constant).unwrap();
        }
        for (var, coeff) in &expr.terms {
            writeln!(out, "{} {block} {i} {j} {coeff}", var + 1).unwrap();
        }
    };

    for (k, psd) in problem.psd_blocks.iter().enumerate() {
        for i in 0..psd.dim {
            for j in i..psd.dim {
                push_expr(&mut out, psd.entry(i, j), k + 1, i + 1, j + 1);
            }
        }
    }
    if lp_rows > 0 {
        let block = problem.psd_blocks.len() + 1;
        let mut slot = 1;
        for eq in &problem.equalities {
            push_expr(&mut out, eq, block, slot, slot);
            push_expr(&mut out, &-eq.clone(), block, slot + 1, slot + 1);
            slot += 2;
        }
        for ineq in &problem.nonneg {
            push_expr(&mut out, ineq, block, slot, slot);
            slot += 1;
        }
    }
    out
}

/// Parses sparse SDPA text. Independent of the exporter: it follows the
/// published format rules (comment lines start with `"` or `*`; braces
/// and commas are permitted separators).
pub fn parse_sdpa(text: &str) -> Result<SdpaData, OpError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
    let mut next_tokens = |what: &str| -> Result<Vec<String>, OpError> {
        let line = lines
            .next()
            .ok_or_else(|| OpError::Invalid(format!("unexpected end of file, expected {what}")))?;
        Ok(line
            .split(|c: char| c.is_whitespace() || c == ',' || c == '{' || c == '}' || c == '(' || c == ')')
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect())
    };
    let parse_usize = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| OpError::Invalid(format!("expected integer, got {t:?}")))
    };
    let parse_f64 = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| OpError::Invalid(format!("expected number, got {t:?}")))
    };

    let num_vars = parse_usize(&next_tokens("variable count")?[0])?;
    let num_blocks = parse_usize(&next_tokens("block count")?[0])?;
    let size_tokens = next_tokens("block sizes")?;
    if size_tokens.len() != num_blocks {
        return Err(OpError::Invalid(format!(
            "expected {num_blocks} block sizes, got {}",
            size_tokens.len()
        )));
    }
    let block_sizes: Vec<i64> = size_tokens
        .iter()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| OpError::Invalid(format!("bad block size {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    let obj_tokens = next_tokens("objective")?;
    if obj_tokens.len() != num_vars {
        return Err(OpError::Invalid(format!(
            "expected {num_vars} objective coefficients, got {}",
            obj_tokens.len()
        )));
    }
    let objective: Vec<f64> = obj_tokens
        .iter()
        .map(|t| parse_f64(t))
        .collect::<Result<_, _>>()?;

    let mut entries = Vec::new();
    for tokens in lines.map(|line| {
        line.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect::<Vec<_>>()
    }) {
        if tokens.len() != 5 {
            return Err(OpError::Invalid(format!(
                "entry line must have 5 fields, got {tokens:?}"
            )));
        }
        let mat = parse_usize(tokens[0])?;
        let block = parse_usize(tokens[1])?;
        let i = parse_usize(tokens[2])?;
        let j = parse_usize(tokens[3])?;
        let value = parse_f64(tokens[4])?;
        if mat > num_vars || block == 0 || block > num_blocks || i == 0 || j == 0 || i > j {
            return Err(OpError::Invalid(format!(
                "entry {mat} {block} {i} {j} out of range"
            )));
        }
        let dim = block_sizes[block - 1].unsigned_abs() as usize;
        if j > dim || (block_sizes[block - 1] < 0 && i != j) {
            return Err(OpError::Invalid(format!(
                "entry {mat} {block} {i} {j} outside block of size {}",
                block_sizes[block - 1]
            )));
        }
        entries.push((mat, block, i, j, value));
    }
    Ok(SdpaData {
        num_vars,
        block_sizes,
        objective,
        entries,
    })
}

impl SdpaData {
    /// Dense value of Σ x_i F_i − F_0 for one block (1-indexed) at a
    /// point x; diagonal blocks expand to full matrices.
    pub fn block_value(&self, block: usize, x: &[f64]) -> Vec<Vec<f64>> {
        let dim = self.block_sizes[block - 1].unsigned_abs() as usize;
        let mut m = vec![vec![0.0; dim]; dim];
        for &(mat, blk, i, j, value) in &self.entries {
            if blk != block {
                continue;
            }
            let contribution = if mat == 0 { -value } else { x[mat - 1] * value };
            m[i - 1][j - 1] += contribution;
            if i != j {
                m[j - 1][i - 1] += contribution;
            }
        }
        m
    }
}
