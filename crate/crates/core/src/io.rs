//! Text formats for problems and results.
//!
//! # System files
//!
//! ```text
//! toricproj-system 1
//! n 3
//! r 2
//! ell 1            # optional: project onto X1..X<ell>
//! seed 0           # optional, likewise bound, retries, precision
//! equation
//!   0 0 0 : 2
//!   1 1 0 : 3
//!   0 1 1 : -1
//! end
//! equation
//!   ...
//! end
//! ```
//!
//! Each equation lists its support, one exponent vector per line, with an
//! optional `: coefficient` (an integer or `p/q`, default 1). A point listed
//! with coefficient 0 stays in the support. `#` starts a comment.
//!
//! # Resolution files
//!
//! ```text
//! toricproj-resolution 1
//! nvars 3
//! free X1
//! projected
//! dependent X2 X3
//! specialized
//! mv_bound 2
//! result                 # or the single line `DENSE_IMAGE t=<t>`
//!   form <linear form>
//!   multiplicity_warning # present only when set
//!   q
//!     <Y-degree> : <rational function>
//!   end
//!   param X2
//!     <Y-degree> : <rational function>
//!   end
//! end
//! parametric             # optional, same layout as `result`
//! ...
//! end
//! provenance
//!   seed 0
//!   order X1 X2 X3
//!   b
//!   xi 3
//!   lambda 0 1
//!   mu
//!   retries 0
//!   precision 8 12
//!   degree_bound 6
//! end
//! ```
//!
//! Coefficient lines run from the highest Y-degree down and omit zeros.
//! The projected resolution in `result` parametrizes the `projected`
//! variables; the `parametric` one parametrizes the `dependent` variables.
//! Emission is canonical, so parsing and re-emitting is the identity on
//! emitted text.

use std::fmt::Write as _;

use crate::algebra::text::{parse_poly, parse_ratfun, render_poly, render_ratfun};
use crate::algebra::{ExpVec, Field, Rat, RatFun, SparsePoly, UniPoly};
use crate::error::{Error, Result};
use crate::polytope::{Support, SupportFamily};
use crate::projection::{Pins, ProjectionOutput, ProjectionProblem, ProjectionResult, Provenance};
use crate::resolution::GeometricResolution;

const SYSTEM_HEADER: &str = "toricproj-system 1";
const RESOLUTION_HEADER: &str = "toricproj-resolution 1";

/// Non-blank lines with comments removed, as (1-based line, 1-based
/// column of the first token, tokens with their columns).
struct Lines {
    items: Vec<Line>,
    pos: usize,
}

struct Line {
    no: usize,
    text: String,
    col: usize,
}

impl Line {
    /// Whitespace-separated tokens with their 1-based columns.
    fn tokens(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push((self.col + s, &self.text[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push((self.col + s, &self.text[s..]));
        }
        out
    }

    fn err(&self, col_offset: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.no, self.col + col_offset, msg)
    }

    /// Splits `key rest` at the first whitespace.
    fn key(&self) -> (&str, &str) {
        match self.text.split_once(char::is_whitespace) {
            Some((k, rest)) => (k, rest.trim()),
            None => (self.text.as_str(), ""),
        }
    }
}

impl Lines {
    fn new(text: &str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("");
                let trimmed = body.trim();
                if trimmed.is_empty() {
                    return None;
                }
                let lead = body.len() - body.trim_start().len();
                Some(Line {
                    no: i + 1,
                    text: trimmed.to_string(),
                    col: lead + 1,
                })
            })
            .collect();
        Lines { items, pos: 0 }
    }

    fn peek(&self) -> Option<&Line> {
        self.items.get(self.pos)
    }

    fn next(&mut self) -> Option<&Line> {
        let line = self.items.get(self.pos);
        self.pos += 1;
        line
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(1, |l| l.no)
    }

    fn expect(&mut self, what: &str) -> Result<&Line> {
        let end = self.last_line();
        self.next().ok_or_else(|| {
            Error::parse(end, 1, format!("unexpected end of input, expected {what}"))
        })
    }
}

fn parse_num<T: std::str::FromStr>(line: &Line, s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| line.err(0, format!("invalid {what} `{s}`")))
}

/// A parsed system file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub nvars: usize,
    pub ell: Option<usize>,
    pub seed: Option<u64>,
    pub bound: Option<u32>,
    pub retries: Option<u32>,
    pub precision: Option<u32>,
    pub equations: Vec<SparsePoly>,
    /// The listed supports, which may contain points whose coefficient is
    /// zero.
    pub family: SupportFamily,
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let head = lines.expect("header")?;
        if head.text != SYSTEM_HEADER {
            return Err(head.err(0, format!("expected `{SYSTEM_HEADER}`")));
        }
        let mut nvars = None;
        let mut r = None;
        let mut out = SystemFile {
            nvars: 0,
            ell: None,
            seed: None,
            bound: None,
            retries: None,
            precision: None,
            equations: Vec::new(),
            family: SupportFamily::new(0, Vec::new())?,
        };
        let mut supports = Vec::new();
        while let Some(line) = lines.next() {
            let (key, rest) = line.key();
            match key {
                "equation" if rest.is_empty() => {
                    let n =
                        nvars.ok_or_else(|| line.err(0, "`n` must precede the first equation"))?;
                    let start = line.no;
                    let (poly, support) = parse_equation(&mut lines, n, start)?;
                    out.equations.push(poly);
                    supports.push(support);
                }
                _ if !out.equations.is_empty() => return Err(line.err(0, "expected `equation`")),
                "n" => nvars = Some(parse_num::<usize>(line, rest, "variable count")?),
                "r" => r = Some((line.no, parse_num::<usize>(line, rest, "equation count")?)),
                "ell" => out.ell = Some(parse_num(line, rest, "projection size")?),
                "seed" => out.seed = Some(parse_num(line, rest, "seed")?),
                "bound" => out.bound = Some(parse_num(line, rest, "bound")?),
                "retries" => out.retries = Some(parse_num(line, rest, "retry limit")?),
                "precision" => out.precision = Some(parse_num(line, rest, "precision")?),
                _ => return Err(line.err(0, format!("unknown key `{key}`"))),
            }
        }
        let n = nvars.ok_or_else(|| Error::parse(lines.last_line(), 1, "missing `n`"))?;
        if let Some((no, r)) = r {
            if r != out.equations.len() {
                return Err(Error::parse(
                    no,
                    1,
                    format!("r is {r} but {} equations follow", out.equations.len()),
                ));
            }
        }
        out.nvars = n;
        out.family = SupportFamily::new(n, supports)?;
        Ok(out)
    }

    /// Problem for the projection driver; needs `ell`.
    pub fn into_problem(self) -> Result<ProjectionProblem> {
        let ell = self
            .ell
            .ok_or_else(|| Error::InvalidArgument("the system file does not set `ell`".into()))?;
        let mut p = ProjectionProblem::new(self.equations, ell)?;
        p.family = self.family;
        if let Some(s) = self.seed {
            p.seed = s;
        }
        if let Some(b) = self.bound {
            p.bound = b;
        }
        if let Some(k) = self.retries {
            p.retry_limit = k;
        }
        p.precision = self.precision.or(p.precision);
        Ok(p)
    }

    pub fn emit(&self) -> String {
        let mut s = format!(
            "{SYSTEM_HEADER}\nn {}\nr {}\n",
            self.nvars,
            self.equations.len()
        );
        let opt = |s: &mut String, key: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(s, "{key} {v}");
            }
        };
        opt(&mut s, "ell", self.ell.map(|v| v.to_string()));
        opt(&mut s, "seed", self.seed.map(|v| v.to_string()));
        opt(&mut s, "bound", self.bound.map(|v| v.to_string()));
        opt(&mut s, "retries", self.retries.map(|v| v.to_string()));
        opt(&mut s, "precision", self.precision.map(|v| v.to_string()));
        for (f, support) in self.equations.iter().zip(self.family.members()) {
            s.push_str("equation\n");
            for p in support.points().iter().rev() {
                let e = ExpVec::new(p.iter().map(|&x| x as u32).collect());
                let c = f.coeff(&e);
                let exps: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "  {} : {c}", exps.join(" "));
            }
            s.push_str("end\n");
        }
        s
    }
}

fn parse_equation(lines: &mut Lines, n: usize, start: usize) -> Result<(SparsePoly, Support)> {
    let mut poly = SparsePoly::zero(n);
    let mut points: Vec<Vec<i64>> = Vec::new();
    loop {
        let end = lines.last_line();
        let line = lines.next().ok_or_else(|| {
            Error::parse(end, 1, format!("equation at line {start} is not closed"))
        })?;
        if line.text == "end" {
            break;
        }
        let (exps, coeff) = match line.text.split_once(':') {
            Some((e, c)) => (e, Some((e.len() + 1, c))),
            None => (line.text.as_str(), None),
        };
        let toks = Line {
            no: line.no,
            text: exps.to_string(),
            col: line.col,
        }
        .tokens()
        .into_iter()
        .map(|(c, t)| (c, t.to_string()))
        .collect::<Vec<_>>();
        if toks.len() != n {
            return Err(Error::Arity {
                line: line.no,
                expected: n,
                found: toks.len(),
            });
        }
        let mut e = Vec::with_capacity(n);
        for (col, t) in &toks {
            if t.starts_with('-') {
                return Err(Error::parse(line.no, *col, "negative exponent"));
            }
            let v: u32 = t
                .parse()
                .map_err(|_| Error::parse(line.no, *col, format!("invalid exponent `{t}`")))?;
            e.push(v);
        }
        let c = match coeff {
            Some((offset, text)) => {
                let trimmed = text.trim();
                let col = line.col + offset + (text.len() - text.trim_start().len());
                trimmed.parse::<Rat>().map_err(|_| {
                    Error::parse(line.no, col, format!("invalid rational `{trimmed}`"))
                })?
            }
            None => Rat::one(),
        };
        let p: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        if points.contains(&p) {
            return Err(line.err(0, "repeated exponent vector"));
        }
        points.push(p);
        poly.add_term(ExpVec::new(e), &c);
    }
    if points.is_empty() {
        return Err(Error::EmptySupport);
    }
    Ok((poly, Support::new(n, points)?))
}

/// Parses a system file into a projection problem.
pub fn parse_system(text: &str) -> Result<ProjectionProblem> {
    SystemFile::parse(text)?.into_problem()
}

fn var_list(vars: &[usize]) -> String {
    vars.iter()
        .map(|v| format!("X{}", v + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn keyed(key: &str, value: &str) -> String {
    if value.is_empty() {
        key.to_string()
    } else {
        format!("{key} {value}")
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn linear_form(nvars: usize, vars: &[usize], coeffs: &[i64]) -> SparsePoly {
    let mut p = SparsePoly::zero(nvars);
    for (&v, &c) in vars.iter().zip(coeffs) {
        let mut e = vec![0u32; nvars];
        e[v] = 1;
        p.add_term(ExpVec::new(e), &Rat::from_int(c));
    }
    p
}

fn emit_upoly(out: &mut String, indent: &str, u: &UniPoly<RatFun>) {
    for (k, c) in u.coeffs().iter().enumerate().rev() {
        if !c.is_zero() {
            let _ = writeln!(out, "{indent}{k} : {}", render_ratfun(c));
        }
    }
}

/// Body of a resolution block (everything between its opening keyword and
/// `end`), indented by `indent`.
fn emit_block(out: &mut String, indent: &str, res: &GeometricResolution) {
    let inner = format!("{indent}  ");
    let _ = writeln!(
        out,
        "{indent}form {}",
        render_poly(&linear_form(res.nvars, &res.dependent_vars, &res.lambda))
    );
    if res.multiplicity_warning {
        let _ = writeln!(out, "{indent}multiplicity_warning");
    }
    let _ = writeln!(out, "{indent}q");
    emit_upoly(out, &inner, &res.q);
    let _ = writeln!(out, "{indent}end");
    for (v, p) in res.dependent_vars.iter().zip(&res.params) {
        let _ = writeln!(out, "{indent}param X{}", v + 1);
        emit_upoly(out, &inner, p);
        let _ = writeln!(out, "{indent}end");
    }
}

/// A standalone resolution in the block layout, opened by `resolution`.
pub fn emit_geometric_resolution(res: &GeometricResolution) -> String {
    let mut s = format!(
        "nvars {}\nfree{}\nresolution\n",
        res.nvars,
        prefixed(&var_list(&res.free_vars))
    );
    emit_block(&mut s, "  ", res);
    s.push_str("end\n");
    s
}

fn prefixed(s: &str) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" {s}")
    }
}

/// Canonical text of a projection result.
pub fn emit_resolution(r: &ProjectionResult) -> String {
    let n = r.provenance.order.len();
    let mut s = String::new();
    let _ = writeln!(s, "{RESOLUTION_HEADER}");
    let _ = writeln!(s, "nvars {n}");
    let _ = writeln!(s, "{}", keyed("free", &var_list(&r.free_vars)));
    let _ = writeln!(s, "{}", keyed("projected", &var_list(&r.projected_vars)));
    let _ = writeln!(s, "{}", keyed("dependent", &var_list(&r.dependent_vars)));
    let _ = writeln!(
        s,
        "{}",
        keyed("specialized", &var_list(&r.specialized_vars))
    );
    let _ = writeln!(s, "mv_bound {}", r.mv_bound);
    match &r.output {
        ProjectionOutput::DenseImage => {
            let _ = writeln!(s, "DENSE_IMAGE t={}", r.free_vars.len());
        }
        ProjectionOutput::Resolution(res) => {
            s.push_str("result\n");
            emit_block(&mut s, "  ", res);
            s.push_str("end\n");
        }
    }
    if let Some(p) = &r.parametric {
        s.push_str("parametric\n");
        emit_block(&mut s, "  ", p);
        s.push_str("end\n");
    }
    let pv = &r.provenance;
    s.push_str("provenance\n");
    let _ = writeln!(s, "  seed {}", pv.seed);
    let _ = writeln!(s, "  {}", keyed("order", &var_list(&pv.order)));
    let _ = writeln!(s, "  {}", keyed("b", &join(&pv.b)));
    let _ = writeln!(s, "  {}", keyed("xi", &join(&pv.xi)));
    let _ = writeln!(s, "  {}", keyed("lambda", &join(&pv.lambda)));
    let _ = writeln!(s, "  {}", keyed("mu", &join(&pv.mu)));
    let _ = writeln!(s, "  retries {}", pv.retries);
    let _ = writeln!(
        s,
        "  precision {} {}",
        pv.precision_used, pv.precision_limit
    );
    let _ = writeln!(s, "  degree_bound {}", pv.degree_bound);
    s.push_str("end\n");
    s
}

/// The same content as [`emit_resolution`] as flat `key=value` lines.
pub fn emit_structured(r: &ProjectionResult) -> String {
    let mut s = String::new();
    let n = r.provenance.order.len();
    let _ = writeln!(s, "format=toricproj-structured 1");
    let _ = writeln!(s, "nvars={n}");
    let _ = writeln!(s, "free={}", var_list(&r.free_vars));
    let _ = writeln!(s, "projected={}", var_list(&r.projected_vars));
    let _ = writeln!(s, "dependent={}", var_list(&r.dependent_vars));
    let _ = writeln!(s, "specialized={}", var_list(&r.specialized_vars));
    let _ = writeln!(s, "mv_bound={}", r.mv_bound);
    let block = |s: &mut String, prefix: &str, res: &GeometricResolution| {
        let _ = writeln!(
            s,
            "{prefix}.form={}",
            render_poly(&linear_form(res.nvars, &res.dependent_vars, &res.lambda))
        );
        let _ = writeln!(s, "{prefix}.degree={}", res.degree());
        let _ = writeln!(
            s,
            "{prefix}.multiplicity_warning={}",
            res.multiplicity_warning
        );
        let mut coeffs = |name: String, u: &UniPoly<RatFun>| {
            for (k, c) in u.coeffs().iter().enumerate().rev() {
                if !c.is_zero() {
                    let _ = writeln!(s, "{name}.{k}={}", render_ratfun(c));
                }
            }
        };
        coeffs(format!("{prefix}.q"), &res.q);
        for (v, p) in res.dependent_vars.iter().zip(&res.params) {
            coeffs(format!("{prefix}.param.X{}", v + 1), p);
        }
    };
    match &r.output {
        ProjectionOutput::DenseImage => {
            let _ = writeln!(s, "result=DENSE_IMAGE t={}", r.free_vars.len());
        }
        ProjectionOutput::Resolution(res) => block(&mut s, "result", res),
    }
    if let Some(p) = &r.parametric {
        block(&mut s, "parametric", p);
    }
    let pv = &r.provenance;
    let _ = writeln!(s, "provenance.seed={}", pv.seed);
    let _ = writeln!(s, "provenance.order={}", var_list(&pv.order));
    let _ = writeln!(s, "provenance.b={}", join(&pv.b));
    let _ = writeln!(s, "provenance.xi={}", join(&pv.xi));
    let _ = writeln!(s, "provenance.lambda={}", join(&pv.lambda));
    let _ = writeln!(s, "provenance.mu={}", join(&pv.mu));
    let _ = writeln!(s, "provenance.retries={}", pv.retries);
    let _ = writeln!(s, "provenance.precision_used={}", pv.precision_used);
    let _ = writeln!(s, "provenance.precision_limit={}", pv.precision_limit);
    let _ = writeln!(s, "provenance.degree_bound={}", pv.degree_bound);
    s
}

fn parse_var(line: &Line, col: usize, tok: &str, n: usize) -> Result<usize> {
    tok.strip_prefix('X')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&i| i >= 1 && i <= n)
        .map(|i| i - 1)
        .ok_or_else(|| {
            Error::parse(
                line.no,
                col,
                format!("expected a variable X1..X{n}, found `{tok}`"),
            )
        })
}

fn parse_vars(line: &Line, n: usize) -> Result<Vec<usize>> {
    line.tokens()
        .into_iter()
        .skip(1)
        .map(|(c, t)| parse_var(line, c, t, n))
        .collect()
}

fn parse_values<T: std::str::FromStr>(line: &Line, what: &str) -> Result<Vec<T>> {
    line.tokens()
        .into_iter()
        .skip(1)
        .map(|(c, t)| {
            t.parse()
                .map_err(|_| Error::parse(line.no, c, format!("invalid {what} `{t}`")))
        })
        .collect()
}

fn expect_key<'a>(lines: &'a mut Lines, key: &str) -> Result<&'a Line> {
    let line = lines.expect(&format!("`{key}`"))?;
    if line.key().0 != key {
        return Err(line.err(0, format!("expected `{key}`")));
    }
    Ok(line)
}

fn parse_section(lines: &mut Lines, n: usize) -> Result<UniPoly<RatFun>> {
    let mut coeffs: Vec<RatFun> = Vec::new();
    let mut last: Option<usize> = None;
    loop {
        let line = lines.expect("`end`")?;
        if line.text == "end" {
            break;
        }
        let Some((k, c)) = line.text.split_once(':') else {
            return Err(line.err(0, "expected `degree : coefficient`"));
        };
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| line.err(0, format!("invalid degree `{}`", k.trim())))?;
        if last.is_some_and(|l| k >= l) {
            return Err(line.err(0, "degrees must decrease"));
        }
        last = Some(k);
        let col = line.col + line.text.find(':').unwrap_or(0) + 1;
        let value = parse_ratfun(c.trim(), n).map_err(|e| match e {
            Error::Parse { col: c2, msg, .. } => Error::parse(line.no, col + c2, msg),
            other => other,
        })?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, RatFun::zero(n));
        }
        coeffs[k] = value;
    }
    Ok(UniPoly::new(coeffs))
}

fn parse_block(
    lines: &mut Lines,
    n: usize,
    free: &[usize],
    dependent: &[usize],
) -> Result<GeometricResolution> {
    let form_line = expect_key(lines, "form")?;
    let (no, col) = (form_line.no, form_line.col);
    let form = parse_poly(form_line.key().1, n).map_err(|e| match e {
        Error::Parse { msg, .. } => Error::parse(no, col, msg),
        other => other,
    })?;
    let mut lambda = vec![0i64; dependent.len()];
    for (e, c) in form.terms() {
        let pos = e.as_slice().iter().position(|&x| x == 1);
        let slot = pos.and_then(|v| dependent.iter().position(|&d| d == v));
        let ok = e.degree() == 1 && c.is_integer();
        match (slot, ok) {
            (Some(k), true) => {
                lambda[k] = c
                    .to_i64()
                    .ok_or_else(|| Error::parse(no, col, "form coefficient too large"))?
            }
            _ => {
                return Err(Error::parse(
                    no,
                    col,
                    "the form must be an integer combination of the parametrized variables",
                ))
            }
        }
    }
    let mut multiplicity_warning = false;
    if lines
        .peek()
        .is_some_and(|l| l.text == "multiplicity_warning")
    {
        lines.next();
        multiplicity_warning = true;
    }
    expect_key(lines, "q")?;
    let q = parse_section(lines, n)?;
    let mut params = Vec::with_capacity(dependent.len());
    for &v in dependent {
        let line = expect_key(lines, "param")?;
        let got = parse_vars(line, n)?;
        if got != [v] {
            return Err(line.err(0, format!("expected `param X{}`", v + 1)));
        }
        params.push(parse_section(lines, n)?);
    }
    let end = lines.expect("`end`")?;
    if end.text != "end" {
        return Err(end.err(0, "expected `end`"));
    }
    Ok(GeometricResolution {
        nvars: n,
        free_vars: free.to_vec(),
        dependent_vars: dependent.to_vec(),
        lambda,
        q,
        params,
        multiplicity_warning,
    })
}

/// Parses a resolution file written by [`emit_resolution`].
pub fn parse_resolution(text: &str) -> Result<ProjectionResult> {
    let mut lines = Lines::new(text);
    let head = lines.expect("header")?;
    if head.text != RESOLUTION_HEADER {
        return Err(head.err(0, format!("expected `{RESOLUTION_HEADER}`")));
    }
    let line = expect_key(&mut lines, "nvars")?;
    let n: usize = parse_num(line, line.key().1, "variable count")?;
    let free = parse_vars(expect_key(&mut lines, "free")?, n)?;
    let projected = parse_vars(expect_key(&mut lines, "projected")?, n)?;
    let dependent = parse_vars(expect_key(&mut lines, "dependent")?, n)?;
    let specialized = parse_vars(expect_key(&mut lines, "specialized")?, n)?;
    let line = expect_key(&mut lines, "mv_bound")?;
    let mv_bound: u64 = parse_num(line, line.key().1, "bound")?;

    let line = lines.expect("`result` or `DENSE_IMAGE`")?;
    let output = if line.text == "result" {
        ProjectionOutput::Resolution(parse_block(&mut lines, n, &free, &projected)?)
    } else if let Some(t) = line.text.strip_prefix("DENSE_IMAGE t=") {
        let t: usize = parse_num(line, t, "dimension")?;
        if t != free.len() {
            return Err(line.err(0, "dense image dimension disagrees with the free variables"));
        }
        ProjectionOutput::DenseImage
    } else {
        return Err(line.err(0, "expected `result` or `DENSE_IMAGE`"));
    };
    let parametric = if lines.peek().is_some_and(|l| l.text == "parametric") {
        lines.next();
        Some(parse_block(&mut lines, n, &free, &dependent)?)
    } else {
        None
    };

    let line = lines.expect("`provenance`")?;
    if line.text != "provenance" {
        return Err(line.err(0, "expected `provenance`"));
    }
    let line = expect_key(&mut lines, "seed")?;
    let seed = parse_num(line, line.key().1, "seed")?;
    let order = parse_vars(expect_key(&mut lines, "order")?, n)?;
    let b = parse_values(expect_key(&mut lines, "b")?, "integer")?;
    let xi = parse_values(expect_key(&mut lines, "xi")?, "rational")?;
    let lambda = parse_values(expect_key(&mut lines, "lambda")?, "integer")?;
    let mu = parse_values(expect_key(&mut lines, "mu")?, "integer")?;
    let line = expect_key(&mut lines, "retries")?;
    let retries = parse_num(line, line.key().1, "retry count")?;
    let line = expect_key(&mut lines, "precision")?;
    let prec: Vec<u32> = parse_values(line, "precision")?;
    let [precision_used, precision_limit] = prec[..] else {
        return Err(line.err(0, "expected `precision <used> <limit>`"));
    };
    let line = expect_key(&mut lines, "degree_bound")?;
    let degree_bound = parse_num(line, line.key().1, "degree bound")?;
    let end = lines.expect("`end`")?;
    if end.text != "end" {
        return Err(end.err(0, "expected `end`"));
    }
    if let Some(extra) = lines.next() {
        return Err(extra.err(0, "trailing content"));
    }
    if order.len() != n {
        return Err(Error::InvalidArgument(
            "the variable order must list every variable".into(),
        ));
    }
    Ok(ProjectionResult {
        free_vars: free,
        projected_vars: projected,
        dependent_vars: dependent,
        specialized_vars: specialized,
        output,
        parametric,
        mv_bound,
        provenance: Provenance {
            seed,
            order,
            b,
            xi,
            lambda,
            mu,
            retries,
            precision_used,
            precision_limit,
            degree_bound,
        },
    })
}

/// Pins that reproduce a stored result: its `b`, linear forms and shift.
pub fn pins_of(r: &ProjectionResult) -> Pins {
    let n = r.provenance.order.len();
    let widen = |vars: &[usize], c: &[i64]| {
        let mut v = vec![0i64; n];
        for (&i, &x) in vars.iter().zip(c) {
            v[i] = x;
        }
        v
    };
    Pins {
        b: Some(r.provenance.b.clone()),
        lambda: Some(widen(&r.dependent_vars, &r.provenance.lambda)),
        mu: Some(widen(&r.projected_vars, &r.provenance.mu)),
        xi: Some(r.provenance.xi.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "toricproj-system 1
n 3
r 2
ell 1
# f1
equation
  0 0 0 : 2
  1 1 0 : 3
  0 1 1 : -1
end
equation
  0 0 0 : -1
  2 1 1 : 2
  0 2 0 : 2
  1 1 1
end
";

    #[test]
    fn system_parses() {
        let f = SystemFile::parse(WORKED).unwrap();
        assert_eq!(f.nvars, 3);
        assert_eq!(f.ell, Some(1));
        assert_eq!(
            f.equations[1],
            parse_poly("-1+2*X1^2*X2*X3+2*X2^2+X1*X2*X3", 3).unwrap()
        );
        let again = SystemFile::parse(&f.emit()).unwrap();
        assert_eq!(again, f);
        assert_eq!(again.emit(), f.emit());
    }

    #[test]
    fn zero_coefficient_keeps_point() {
        let f =
            SystemFile::parse("toricproj-system 1\nn 1\nequation\n0 : 0\n1 : 1\nend\n").unwrap();
        assert_eq!(f.family.members()[0].len(), 2);
        assert_eq!(f.equations[0], parse_poly("X1", 1).unwrap());
    }

    #[test]
    fn system_errors() {
        let empty = "toricproj-system 1\nn 2\nequation\nend\n";
        assert_eq!(SystemFile::parse(empty), Err(Error::EmptySupport));
        let arity = "toricproj-system 1\nn 2\nequation\n1 0 1 : 3\nend\n";
        assert_eq!(
            SystemFile::parse(arity),
            Err(Error::Arity {
                line: 4,
                expected: 2,
                found: 3
            })
        );
        let neg = "toricproj-system 1\nn 2\nequation\n  1 -1 : 3\nend\n";
        assert!(matches!(
            SystemFile::parse(neg),
            Err(Error::Parse {
                line: 4,
                col: 5,
                ..
            })
        ));
        let coeff = "toricproj-system 1\nn 2\nequation\n1 1 : 0.5\nend\n";
        assert!(matches!(
            SystemFile::parse(coeff),
            Err(Error::Parse {
                line: 4,
                col: 7,
                ..
            })
        ));
        let count = "toricproj-system 1\nn 2\nr 2\nequation\n1 1\nend\n";
        assert!(matches!(
            SystemFile::parse(count),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            SystemFile::parse("toricproj-system 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let open = "toricproj-system 1\nn 1\nequation\n1\n";
        assert!(matches!(SystemFile::parse(open), Err(Error::Parse { .. })));
    }

    #[test]
    fn problem_needs_ell() {
        let text = WORKED.replace("ell 1\n", "");
        assert!(matches!(
            parse_system(&text),
            Err(Error::InvalidArgument(_))
        ));
        let p = parse_system(WORKED).unwrap();
        assert_eq!(p.ell, 1);
        assert_eq!(p.system.len(), 2);
    }

    #[test]
    fn resolution_roundtrip() {
        let mut p = parse_system(&WORKED.replace("ell 1", "ell 2")).unwrap();
        p.pins.lambda = Some(vec![0, 0, 1]);
        let out = crate::projection::q_projection(&p).unwrap();
        let text = emit_resolution(&out);
        assert!(text.contains("(-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1)"));
        let back = parse_resolution(&text).unwrap();
        assert_eq!(back, out);
        assert_eq!(emit_resolution(&back), text);
        assert_eq!(pins_of(&back).lambda, Some(vec![0, 0, 1]));
        assert!(
            emit_structured(&out).contains("parametric.q.1=(-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1)")
        );
    }

    #[test]
    fn dense_image_marker() {
        let out = crate::projection::q_projection(&parse_system(WORKED).unwrap()).unwrap();
        let text = emit_resolution(&out);
        assert!(text.contains("\nDENSE_IMAGE t=1\n"));
        assert_eq!(emit_resolution(&parse_resolution(&text).unwrap()), text);
    }

    #[test]
    fn resolution_errors() {
        assert!(matches!(
            parse_resolution("toricproj-resolution 1\nnvars 2\nfree X3\n"),
            Err(Error::Parse {
                line: 3,
                col: 6,
                ..
            })
        ));
        assert!(matches!(
            parse_resolution("toricproj-resolution 1\nnvars 2\n"),
            Err(Error::Parse { .. })
        ));
    }
}
