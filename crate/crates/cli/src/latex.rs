//! Just enough LaTeX reading for the fixture files: environments, arrays,
//! braced groups, `\tableau{…}` and function-call argument lists.

use anyhow::{anyhow, bail, Result};
use qkz_core::combinatorics::Tableau;

/// Index just past the group closing the brace at `open`.
pub fn close_brace(src: &str, open: usize) -> Result<usize> {
    let b = src.as_bytes();
    if b.get(open) != Some(&b'{') {
        bail!("expected '{{' at byte {open}");
    }
    let mut depth = 0usize;
    for (i, &c) in b.iter().enumerate().skip(open) {
        match c {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i + 1);
                }
            }
            _ => {}
        }
    }
    bail!("unbalanced braces after byte {open}")
}

/// Bodies of every `\begin{name}…\end{name}`, skipping an argument group
/// such as the column spec of `array`.
pub fn environments<'a>(src: &'a str, name: &str) -> Result<Vec<&'a str>> {
    let begin = format!("\\begin{{{name}}}");
    let end = format!("\\end{{{name}}}");
    let mut out = Vec::new();
    let mut rest = 0;
    while let Some(p) = src[rest..].find(&begin) {
        let mut start = rest + p + begin.len();
        if src[start..].starts_with('{') {
            start = close_brace(src, start)?;
        }
        let stop = src[start..]
            .find(&end)
            .ok_or_else(|| anyhow!("{begin} without {end}"))?
            + start;
        out.push(&src[start..stop]);
        rest = stop + end.len();
    }
    Ok(out)
}

/// Cells of an array body, split on `\\` and `&`, trimmed; empty trailing
/// rows dropped.
pub fn array_cells(body: &str) -> Vec<Vec<String>> {
    body.split("\\\\")
        .map(|row| row.split('&').map(|c| c.trim().to_string()).collect::<Vec<_>>())
        .filter(|row| !(row.len() == 1 && row[0].is_empty()))
        .collect()
}

/// Every `\tableau{…}` in `src`, in order.
pub fn tableaux(src: &str) -> Result<Vec<Tableau>> {
    let mut out = Vec::new();
    let mut rest = 0;
    while let Some(p) = src[rest..].find("\\tableau") {
        let open = rest + p + "\\tableau".len();
        let close = close_brace(src, open)?;
        out.push(Tableau::parse_latex(&src[rest + p..close])?);
        rest = close;
    }
    Ok(out)
}

/// Comma-separated arguments of every `name(…)` call in `src`.
pub fn call_args(src: &str, name: &str) -> Result<Vec<Vec<String>>> {
    let pat = format!("{name}(");
    let mut out = Vec::new();
    let mut rest = 0;
    while let Some(p) = src[rest..].find(&pat) {
        let start = rest + p + pat.len();
        let mut depth = 1usize;
        let mut stop = None;
        for (i, c) in src[start..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        stop = Some(start + i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let stop = stop.ok_or_else(|| anyhow!("unclosed call to {name}"))?;
        out.push(split_top(&src[start..stop], ','));
        rest = stop + 1;
    }
    Ok(out)
}

/// Splits on `sep` outside of any bracket.
pub fn split_top(src: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in src.chars() {
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    out.push(cur.trim().to_string());
    out
}

/// Drops alignment marks and display line breaks.
pub fn strip_layout(src: &str) -> String {
    src.replace("\\\\", " ").replace('&', " ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrays_and_calls() {
        let src = r"x \begin{array}{cc} 1 & \frac{a}{b} \\ 0 & 2 \\ \end{array} y";
        let envs = environments(src, "array").unwrap();
        assert_eq!(envs.len(), 1);
        let cells = array_cells(envs[0]);
        assert_eq!(cells, vec![vec!["1", r"\frac{a}{b}"], vec!["0", "2"]]);
        let args = call_args(r"\Psi(z_2,f(a,b),z_1+5\hbar)=\rho\,\Psi(z_1)", r"\Psi").unwrap();
        assert_eq!(args[0], vec!["z_2", "f(a,b)", r"z_1+5\hbar"]);
        assert_eq!(args[1], vec!["z_1"]);
    }

    #[test]
    fn tableau_subscripts() {
        let t = tableaux(r"\Psi_{\tinyboxes\tableau{1&2\\1&3\\2&4\\3&4\\}}&=").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].rows(), &[vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 4]]);
    }
}
