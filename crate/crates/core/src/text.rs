//! Text grammar for polynomials, group elements, Lie elements and subgroup
//! files, with positioned errors.
//!
//! Monomial syntax, shared by all parsers: `x<i>` with an optional `^<e>`,
//! juxtaposition for products, integer coefficients, `+` (or `-`) between
//! terms; whitespace is insignificant. Examples: `2x1^2x2 + x1 + 1`.
//!
//! Group elements are products of layer terms `(<poly>)D<k>` joined by `*`;
//! a bare `D<k>` abbreviates `(1)D<k>`. A polynomial attached to layer k may
//! only read x_1..x_(k-1). Lie elements swap `D` for `d` and are sums, not
//! products: `2x1^2d3 + x1d2`.
//!
//! Subgroup files carry a header `p=<p> n=<n>` followed by one monic
//! monomial per line in the element grammar.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::liealg::LieElement;
use crate::params::PrimeParams;
use crate::polyring::{Coeff, ExpVec, TruncPoly};
use crate::structure::SaturatedSubgroup;
use crate::wreath::{PowerMonomial, WreathElement};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn eat(&mut self, expected: u8) -> bool {
        if self.peek() == Some(expected) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn parse_uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse { pos: start, msg: "expected a number".into() });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digits are utf8")
            .parse::<u64>()
            .map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })
    }
}

/// A single parsed term: coefficient and raw exponents (1-based variables).
fn parse_term(cur: &mut Cursor<'_>, p: u32, nvars: usize) -> Result<(Coeff, ExpVec)> {
    let mut coeff: u64 = 1;
    let mut saw_anything = false;
    if matches!(cur.peek(), Some(b'0'..=b'9')) {
        coeff = cur.parse_uint()?;
        saw_anything = true;
    }
    let mut exps = vec![0u64; nvars];
    while cur.peek() == Some(b'x') {
        let var_pos = cur.pos;
        cur.bump();
        let var = cur.parse_uint()? as usize;
        if var == 0 || var > nvars {
            return Err(Error::LayerViolation(format!(
                "variable x{var} at position {var_pos} not allowed here (only x1..x{nvars})"
            )));
        }
        let e = if cur.eat(b'^') { cur.parse_uint()? } else { 1 };
        exps[var - 1] += e;
        saw_anything = true;
    }
    if !saw_anything {
        return Err(cur.error("expected a coefficient or a variable"));
    }
    let reduced = ExpVec::new(
        exps.iter()
            .map(|&e| crate::polyring::exp_reduce(p, e))
            .collect(),
    );
    Ok(((coeff % p as u64) as Coeff, reduced))
}

fn parse_poly_body(cur: &mut Cursor<'_>, p: u32, nvars: usize) -> Result<TruncPoly> {
    let mut terms: Vec<(ExpVec, Coeff)> = Vec::new();
    let mut negate = false;
    if cur.eat(b'-') {
        negate = true;
    }
    loop {
        let (c, e) = parse_term(cur, p, nvars)?;
        let c = if negate { (p - c % p) % p } else { c };
        terms.push((e, c));
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
                negate = false;
            }
            Some(b'-') => {
                cur.bump();
                negate = true;
            }
            _ => break,
        }
    }
    TruncPoly::from_terms(p, nvars, terms)
}

/// Parse a polynomial on `nvars` variables over F_p. The whole input must
/// be consumed.
pub fn parse_poly(p: u32, nvars: usize, text: &str) -> Result<TruncPoly> {
    let mut cur = Cursor::new(text);
    let poly = parse_poly_body(&mut cur, p, nvars)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(poly)
}

/// One element term `(<poly>)D<k>` or `D<k>`; returns (layer, poly).
fn parse_element_term(cur: &mut Cursor<'_>, params: PrimeParams) -> Result<(u32, TruncPoly)> {
    match cur.peek() {
        Some(b'(') => {
            cur.bump();
            // the layer is only known after the closing paren, so scan ahead
            // for it first: find the matching ')' then the D<k> suffix
            let poly_start = cur.pos;
            let mut depth = 1usize;
            let mut end = cur.pos;
            while end < cur.bytes.len() {
                match cur.bytes[end] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                end += 1;
            }
            if depth != 0 {
                return Err(cur.error("unclosed '('"));
            }
            let poly_text = std::str::from_utf8(&cur.bytes[poly_start..end]).expect("utf8");
            cur.pos = end + 1;
            if cur.peek() != Some(b'D') {
                return Err(cur.error("expected 'D<k>' after ')'"));
            }
            cur.bump();
            let layer = cur.parse_uint()? as u32;
            check_layer(params, layer, cur.pos)?;
            let poly = parse_poly(params.p(), layer as usize - 1, poly_text).map_err(
                |e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos: poly_start + pos, msg },
                    other => other,
                },
            )?;
            Ok((layer, poly))
        }
        Some(b'D') => {
            cur.bump();
            let layer = cur.parse_uint()? as u32;
            check_layer(params, layer, cur.pos)?;
            Ok((layer, TruncPoly::one(params.p(), layer as usize - 1)))
        }
        _ => Err(cur.error("expected '(' or 'D'")),
    }
}

fn check_layer(params: PrimeParams, layer: u32, pos: usize) -> Result<()> {
    if layer < 1 || layer > params.n() {
        return Err(Error::Parse {
            pos,
            msg: format!("layer {layer} out of range 1..={}", params.n()),
        });
    }
    Ok(())
}

/// Parse a group element: layer terms joined by `*`, multiplied in order
/// and returned in normal form.
pub fn parse_element(params: PrimeParams, text: &str) -> Result<WreathElement> {
    let mut cur = Cursor::new(text);
    let mut acc: Option<WreathElement> = None;
    loop {
        let (layer, poly) = parse_element_term(&mut cur, params)?;
        let factor = WreathElement::from_single_layer(params, layer, poly)?;
        acc = Some(match acc {
            None => factor,
            Some(prev) => prev.multiply(&factor)?,
        });
        if !cur.eat(b'*') {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(acc.expect("at least one term parsed"))
}

/// Parse a monic power monomial in the element grammar, e.g. `(x1^2x2)D3`.
pub fn parse_monomial(params: PrimeParams, text: &str) -> Result<PowerMonomial> {
    let mut cur = Cursor::new(text);
    let (layer, poly) = parse_element_term(&mut cur, params)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    if poly.term_count() != 1 {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected a single monic monomial".into(),
        });
    }
    let (exps, coeff) = poly.leading().expect("one term");
    if coeff != 1 {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("monomial must be monic, has coefficient {coeff}"),
        });
    }
    PowerMonomial::new(params, layer, exps.clone())
}

/// Parse a Lie element: terms `c x.. d<k>` joined by `+`/`-`.
pub fn parse_lie_element(params: PrimeParams, text: &str) -> Result<LieElement> {
    let p = params.p();
    let mut cur = Cursor::new(text);
    let mut out = LieElement::zero(params);
    let mut negate = false;
    if cur.eat(b'-') {
        negate = true;
    }
    loop {
        let mut coeff: u64 = 1;
        if matches!(cur.peek(), Some(b'0'..=b'9')) {
            coeff = cur.parse_uint()?;
        }
        // raw exponents keyed by 1-based variable; the layer bound is only
        // checked once the 'd<k>' suffix is known
        let mut exps: Vec<(usize, u64, usize)> = Vec::new();
        while cur.peek() == Some(b'x') {
            let var_pos = cur.pos;
            cur.bump();
            let var = cur.parse_uint()? as usize;
            let e = if cur.eat(b'^') { cur.parse_uint()? } else { 1 };
            exps.push((var, e, var_pos));
        }
        if cur.peek() != Some(b'd') {
            return Err(cur.error("expected 'd<k>'"));
        }
        cur.bump();
        let layer = cur.parse_uint()? as u32;
        check_layer(params, layer, cur.pos)?;
        let nvars = layer as usize - 1;
        let mut raw = vec![0u64; nvars];
        for (var, e, pos) in exps {
            if var == 0 || var > nvars {
                return Err(Error::LayerViolation(format!(
                    "variable x{var} at position {pos} not allowed in layer {layer}"
                )));
            }
            raw[var - 1] += e;
        }
        if raw.iter().any(|&e| e >= p as u64) {
            return Err(Error::ParamRange(
                "exponent of a basis derivation must stay below p".into(),
            ));
        }
        let mono = PowerMonomial::new(params, layer, ExpVec::new(raw.iter().map(|&e| e as u8).collect()))?;
        let c = (coeff % p as u64) as Coeff;
        let c = if negate { (p - c) % p } else { c };
        out = out.add(&LieElement::term(params, c, mono))?;
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
                negate = false;
            }
            Some(b'-') => {
                cur.bump();
                negate = true;
            }
            _ => break,
        }
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(out)
}

fn render_exps(exps: &ExpVec) -> String {
    let mut out = String::new();
    for (idx, e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        out.push('x');
        out.push_str(&(idx + 1).to_string());
        if e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
    out
}

/// Canonical polynomial text: terms in decreasing p-degree, `0` when zero.
pub fn render_poly(f: &TruncPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    let terms: Vec<_> = f.terms().collect();
    for (exps, coeff) in terms.into_iter().rev() {
        let vars = render_exps(exps);
        let part = if vars.is_empty() {
            coeff.to_string()
        } else if coeff == 1 {
            vars
        } else {
            format!("{coeff}{vars}")
        };
        parts.push(part);
    }
    parts.join(" + ")
}

/// Canonical element text: nonzero layers from the top down, joined by
/// ` * `; constant-1 layers render as a bare `D<k>`; the identity renders
/// as `(0)D1`.
pub fn render_element(w: &WreathElement) -> String {
    let mut parts = Vec::new();
    for k in (1..=w.params().n()).rev() {
        let f = w.layer(k);
        if f.is_zero() {
            continue;
        }
        if f.term_count() == 1 {
            if let Some((exps, 1)) = f.leading() {
                if exps.is_zero() {
                    parts.push(format!("D{k}"));
                    continue;
                }
            }
        }
        parts.push(format!("({})D{k}", render_poly(f)));
    }
    if parts.is_empty() {
        return "(0)D1".into();
    }
    parts.join(" * ")
}

/// Monic monomial in the element grammar: `D<k>` or `(x..)D<k>`.
pub fn render_monomial(m: &PowerMonomial) -> String {
    if m.exps().is_zero() {
        format!("D{}", m.layer())
    } else {
        format!("({})D{}", render_exps(m.exps()), m.layer())
    }
}

/// Basis derivation in the Lie grammar: `d<k>` or `x..d<k>`.
pub fn render_lie_monomial(m: &PowerMonomial) -> String {
    format!("{}d{}", render_exps(m.exps()), m.layer())
}

/// Canonical Lie element text: terms in decreasing (layer, p-degree) order.
pub fn render_lie_element(e: &LieElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let terms: Vec<_> = e.terms().collect();
    let parts: Vec<String> = terms
        .into_iter()
        .rev()
        .map(|(m, c)| {
            if c == 1 {
                render_lie_monomial(m)
            } else {
                format!("{c}{}", render_lie_monomial(m))
            }
        })
        .collect();
    parts.join(" + ")
}

/// Parse a subgroup file: `p=<p> n=<n>` header, one monic monomial per
/// line. Blank lines and `#` comments are skipped.
pub fn parse_subgroup_file(text: &str) -> Result<(PrimeParams, SaturatedSubgroup)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { pos: 0, msg: "missing 'p=<p> n=<n>' header".into() })?;
    let mut p = None;
    let mut n = None;
    for token in header.split_whitespace() {
        if let Some(v) = token.strip_prefix("p=") {
            p = v.parse::<u32>().ok();
        } else if let Some(v) = token.strip_prefix("n=") {
            n = v.parse::<u32>().ok();
        } else {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("unexpected header token '{token}'"),
            });
        }
    }
    let (Some(p), Some(n)) = (p, n) else {
        return Err(Error::Parse { pos: 0, msg: "header must set both p= and n=".into() });
    };
    let params = PrimeParams::new(p, n)?;
    let mut basis = BTreeSet::new();
    for (lineno, line) in lines {
        let m = parse_monomial(params, line).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos,
                msg: format!("line {}: {msg}", lineno + 1),
            },
            other => other,
        })?;
        basis.insert(m);
    }
    let subgroup = SaturatedSubgroup::new(params, basis)?;
    Ok((params, subgroup))
}

/// Render a subgroup in the file format.
pub fn render_subgroup_file(s: &SaturatedSubgroup) -> String {
    let mut out = format!("p={} n={}\n", s.params().p(), s.params().n());
    for m in s.basis() {
        out.push_str(&render_monomial(m));
        out.push('\n');
    }
    out
}
