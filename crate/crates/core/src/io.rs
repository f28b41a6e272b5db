//! Line-oriented text formats for instances, witnesses and reduction metadata.
//!
//! ```text
//! MLD            MQ                          SF                WITNESS 4
//! n 4            n 3                         q 1               0110
//! m 2            m 1                         lambda 0
//! t 1            EQ Q 1 2 ; L 3 ; C 0        orig 3
//! H                                          padding 0
//! 1100                                       T 1 2 3
//! 0011
//! s 10
//! ```
//!
//! Standard-form files list triples (`T x y z`), linear rows
//! (`LN k.. ; C b`) and then the definitions of every non-original variable
//! (`DEF PROD new a b`, `DEF ALIAS new old`, `DEF CHAIN new a b`,
//! `DEF CONST new b`), in increasing order of `new`. Indices are 1-based.
//! Every file is ASCII, has no tabs and ends with a newline.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::alpha::{AlphaArtifact, MldInstance};
use crate::beta::{BetaArtifact, BLOCK};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::normalize::{fresh_aux, DefKind, LinearEq, QuadTriple, StandardFormSystem, TransformLog};
use crate::poly::{BooleanPolynomial, Monomial, MqInstance, Origin, VarId, VariableRegistry};

/// Kind of a file, read from its first token.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Mld,
    Mq,
    StandardForm,
    Witness,
}

impl FileKind {
    pub fn tag(self) -> &'static str {
        match self {
            FileKind::Mld => "MLD",
            FileKind::Mq => "MQ",
            FileKind::StandardForm => "SF",
            FileKind::Witness => "WITNESS",
        }
    }
}

pub fn detect_kind(text: &str) -> Result<FileKind> {
    let first = text.split(['\n', ' ']).next().unwrap_or("");
    match first {
        "MLD" => Ok(FileKind::Mld),
        "MQ" => Ok(FileKind::Mq),
        "SF" => Ok(FileKind::StandardForm),
        "WITNESS" => Ok(FileKind::Witness),
        other => Err(Error::parse(1, 1, format!("unknown file kind {other:?}"))),
    }
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Result<Self> {
        for (i, line) in text.split('\n').enumerate() {
            if let Some(col) = line.find('\t') {
                return Err(Error::parse(i + 1, col + 1, "tab character"));
            }
            if let Some(col) = line.find(|c: char| !c.is_ascii() || c == '\r') {
                return Err(Error::parse(i + 1, col + 1, "unexpected character"));
            }
        }
        let Some(body) = text.strip_suffix('\n') else {
            let line = text.split('\n').count();
            return Err(Error::parse(line, 1, "missing trailing newline"));
        };
        Ok(Lines {
            lines: body.split('\n').collect(),
            pos: 0,
        })
    }

    /// 1-based number of the line `next` would return.
    fn line_no(&self) -> usize {
        self.pos + 1
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok((self.pos, l))
            }
            None => Err(Error::parse(
                self.line_no(),
                1,
                format!("expected {what}, found end of file"),
            )),
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            None => Ok(()),
            Some(_) => Err(Error::parse(self.line_no(), 1, "unexpected trailing content")),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        let (no, line) = self.next(word)?;
        if line != word {
            return Err(Error::parse(no, 1, format!("expected {word:?}")));
        }
        Ok(())
    }

    /// A `key <int>` header line.
    fn header(&mut self, key: &str) -> Result<usize> {
        let (no, line) = self.next(key)?;
        let toks = tokens(line);
        match toks.as_slice() {
            [(_, k), (col, v)] if *k == key => parse_uint(no, *col, v),
            [(_, k), ..] if *k != key => Err(Error::parse(no, 1, format!("expected header key {key:?}, found {k:?}"))),
            _ => Err(Error::parse(no, 1, format!("expected \"{key} <integer>\""))),
        }
    }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c == ' ', start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_uint(line: usize, col: usize, tok: &str) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) || (tok.len() > 1 && tok.starts_with('0')) {
        return Err(Error::parse(
            line,
            col,
            format!("expected a non-negative integer, found {tok:?}"),
        ));
    }
    tok.parse()
        .map_err(|_| Error::parse(line, col, format!("integer {tok:?} is too large")))
}

fn parse_bits(line: usize, col: usize, tok: &str, len: usize, what: &str) -> Result<BitVector> {
    if let Some(i) = tok.bytes().position(|b| b != b'0' && b != b'1') {
        return Err(Error::parse(line, col + i, format!("non-binary digit in {what}")));
    }
    if tok.len() != len {
        return Err(Error::parse(
            line,
            col,
            format!("{what} has length {}, expected {len}", tok.len()),
        ));
    }
    Ok(BitVector::from_bools(
        &tok.bytes().map(|b| b == b'1').collect::<Vec<_>>(),
    ))
}

fn parse_var(line: usize, col: usize, tok: &str, nvars: usize) -> Result<VarId> {
    let i = parse_uint(line, col, tok)?;
    if i == 0 || i > nvars {
        return Err(Error::parse(
            line,
            col,
            format!("variable index {i} outside 1..={nvars}"),
        ));
    }
    Ok(VarId(i as u32))
}

pub fn serialize_mld(inst: &MldInstance) -> String {
    let mut out = format!("MLD\nn {}\nm {}\nt {}\nH\n", inst.n(), inst.m(), inst.t());
    for row in inst.h().row_iter() {
        let _ = writeln!(out, "{row}");
    }
    if inst.m() == 0 {
        out.push_str("s\n");
    } else {
        let _ = writeln!(out, "s {}", inst.s());
    }
    out
}

pub fn parse_mld(text: &str) -> Result<MldInstance> {
    let mut lines = Lines::new(text)?;
    lines.keyword("MLD")?;
    let n = lines.header("n")?;
    let m = lines.header("m")?;
    let t_line = lines.line_no();
    let t = lines.header("t")?;
    if t > n {
        return Err(Error::parse(
            t_line,
            3,
            format!("weight bound {t} exceeds code length {n}"),
        ));
    }
    lines.keyword("H")?;
    let mut rows = Vec::with_capacity(m);
    for r in 0..m {
        let (no, line) = lines.next("a row of H")?;
        if line.starts_with('s') && (line == "s" || line.starts_with("s ")) {
            return Err(Error::parse(no, 1, format!("H has {r} rows, expected {m}")));
        }
        rows.push(parse_bits(no, 1, line, n, &format!("row {} of H", r + 1))?);
    }
    let (no, line) = lines.next("the syndrome line")?;
    let s = match tokens(line).as_slice() {
        [(_, "s")] if m == 0 => BitVector::zeros(0),
        [(_, "s"), (col, bits)] => parse_bits(no, *col, bits, m, "syndrome")?,
        _ => return Err(Error::parse(no, 1, "expected \"s <bits>\"")),
    };
    lines.finish()?;
    let h = BitMatrix::from_rows(rows, n)?;
    MldInstance::new(h, s, t)
}

pub fn serialize_mq(inst: &MqInstance) -> String {
    let mut out = format!("MQ\nn {}\nm {}\n", inst.nvars(), inst.num_equations());
    for f in inst.equations() {
        out.push_str(&equation_line(f));
        out.push('\n');
    }
    out
}

fn equation_line(f: &BooleanPolynomial) -> String {
    let mut q = String::new();
    let mut l = String::new();
    for m in f.monomials() {
        match m.vars() {
            [a, b] => {
                let _ = write!(q, " {} {}", a.0, b.0);
            }
            [a] => {
                let _ = write!(l, " {}", a.0);
            }
            _ => {}
        }
    }
    format!("EQ Q{q} ; L{l} ; C {}", f.constant_term() as u8)
}

pub fn parse_mq(text: &str) -> Result<MqInstance> {
    let mut lines = Lines::new(text)?;
    lines.keyword("MQ")?;
    let n = lines.header("n")?;
    let m = lines.header("m")?;
    let mut eqs = Vec::with_capacity(m);
    for _ in 0..m {
        let (no, line) = lines.next("an EQ line")?;
        eqs.push(parse_eq_line(no, line, n)?);
    }
    lines.finish()?;
    MqInstance::with_default_names(n, eqs)
}

fn parse_eq_line(no: usize, line: &str, n: usize) -> Result<BooleanPolynomial> {
    let toks = tokens(line);
    let bad = |col: usize, msg: &str| Error::parse(no, col, msg.to_string());
    let mut it = toks.into_iter().peekable();
    match (it.next(), it.next()) {
        (Some((_, "EQ")), Some((_, "Q"))) => {}
        _ => return Err(bad(1, "expected \"EQ Q\"")),
    }
    let mut f = BooleanPolynomial::zero();
    let mut seen = BTreeSet::new();
    let mut pending: Option<(usize, VarId)> = None;
    loop {
        let Some((col, tok)) = it.next() else {
            return Err(bad(line.len() + 1, "expected \"; L\""));
        };
        if tok == ";" {
            if let Some((c, _)) = pending {
                return Err(bad(c, "unpaired quadratic index"));
            }
            break;
        }
        let v = parse_var(no, col, tok, n)?;
        match pending.take() {
            None => pending = Some((col, v)),
            Some((_, a)) => {
                if a >= v {
                    return Err(bad(col, "quadratic pairs must satisfy i < j"));
                }
                if !seen.insert((a, v)) {
                    return Err(bad(col, "repeated quadratic pair"));
                }
                f.toggle(Monomial::from_vars([a, v]));
            }
        }
    }
    if it.next().map(|t| t.1) != Some("L") {
        return Err(bad(1, "expected \"L\" section"));
    }
    let mut seen = BTreeSet::new();
    loop {
        let Some((col, tok)) = it.next() else {
            return Err(bad(line.len() + 1, "expected \"; C\""));
        };
        if tok == ";" {
            break;
        }
        let v = parse_var(no, col, tok, n)?;
        if !seen.insert(v) {
            return Err(bad(col, "repeated linear index"));
        }
        f.toggle(Monomial::from_vars([v]));
    }
    if it.next().map(|t| t.1) != Some("C") {
        return Err(bad(1, "expected \"C\" section"));
    }
    match (it.next(), it.next()) {
        (Some((_, "0")), None) => {}
        (Some((_, "1")), None) => f.toggle(Monomial::one()),
        (Some((col, _)), _) => return Err(bad(col, "constant must be a single 0 or 1")),
        (None, _) => return Err(bad(line.len() + 1, "missing constant")),
    }
    Ok(f)
}

pub fn serialize_sf(sf: &StandardFormSystem) -> String {
    let mut out = format!(
        "SF\nq {}\nlambda {}\norig {}\npadding {}\n",
        sf.q(),
        sf.lambda(),
        sf.original_vars(),
        sf.padding_triples
    );
    for t in &sf.quad_eqs {
        let _ = writeln!(out, "T {} {} {}", t.x.0, t.y.0, t.z.0);
    }
    for l in &sf.lin_eqs {
        out.push_str("LN");
        for v in &l.vars {
            let _ = write!(out, " {}", v.0);
        }
        let _ = writeln!(out, " ; C {}", l.delta as u8);
    }
    for d in &sf.log.defs {
        let _ = match d.kind {
            DefKind::Product(a, b) => writeln!(out, "DEF PROD {} {} {}", d.new.0, a.0, b.0),
            DefKind::Alias(a) => writeln!(out, "DEF ALIAS {} {}", d.new.0, a.0),
            DefKind::Chain(a, b) => writeln!(out, "DEF CHAIN {} {} {}", d.new.0, a.0, b.0),
            DefKind::Const(c) => writeln!(out, "DEF CONST {} {}", d.new.0, c as u8),
        };
    }
    out
}

pub fn parse_sf(text: &str) -> Result<StandardFormSystem> {
    let mut lines = Lines::new(text)?;
    lines.keyword("SF")?;
    let q = lines.header("q")?;
    let lambda = lines.header("lambda")?;
    let orig_line = lines.line_no();
    let orig = lines.header("orig")?;
    let pad_line = lines.line_no();
    let padding = lines.header("padding")?;
    let nvars = 3 * q;
    if orig > nvars {
        return Err(Error::parse(
            orig_line,
            6,
            format!("{orig} originals but only {nvars} variables"),
        ));
    }
    if padding > q {
        return Err(Error::parse(
            pad_line,
            9,
            format!("{padding} padding triples but q = {q}"),
        ));
    }
    let mut quad_eqs = Vec::with_capacity(q);
    for _ in 0..q {
        let (no, line) = lines.next("a T line")?;
        match tokens(line).as_slice() {
            [(_, "T"), (c1, x), (c2, y), (c3, z)] => quad_eqs.push(QuadTriple {
                x: parse_var(no, *c1, x, nvars)?,
                y: parse_var(no, *c2, y, nvars)?,
                z: parse_var(no, *c3, z, nvars)?,
            }),
            _ => return Err(Error::parse(no, 1, "expected \"T x y z\"")),
        }
    }
    let mut lin_eqs = Vec::with_capacity(lambda);
    for _ in 0..lambda {
        let (no, line) = lines.next("an LN line")?;
        let toks = tokens(line);
        if toks.first().map(|t| t.1) != Some("LN") || toks.len() < 4 {
            return Err(Error::parse(no, 1, "expected \"LN k.. ; C b\""));
        }
        let k = toks.len();
        if toks[k - 3].1 != ";" || toks[k - 2].1 != "C" {
            return Err(Error::parse(no, toks[k - 3].0, "expected \"; C b\""));
        }
        let mut vars = Vec::new();
        for &(col, tok) in &toks[1..k - 3] {
            vars.push(parse_var(no, col, tok, nvars)?);
        }
        if vars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(no, 4, "variables must be strictly increasing"));
        }
        if vars.len() > 3 {
            return Err(Error::parse(no, 1, "a linear row has at most three variables"));
        }
        let delta = match toks[k - 1].1 {
            "0" => false,
            "1" => true,
            _ => return Err(Error::parse(no, toks[k - 1].0, "constant must be 0 or 1")),
        };
        lin_eqs.push(LinearEq { vars, delta });
    }
    let padded: BTreeSet<VarId> = quad_eqs[q - padding..].iter().flat_map(|t| t.vars()).collect();
    let mut registry = VariableRegistry::with_originals(orig);
    let mut log = TransformLog::new(orig);
    for expected in orig + 1..=nvars {
        let (no, line) = lines.next("a DEF line")?;
        let toks = tokens(line);
        let var = |i: usize| -> Result<VarId> {
            let (col, tok) = toks
                .get(i)
                .copied()
                .ok_or_else(|| Error::parse(no, line.len() + 1, "missing operand"))?;
            parse_var(no, col, tok, nvars)
        };
        if toks.first().map(|t| t.1) != Some("DEF") {
            return Err(Error::parse(no, 1, "expected a DEF line"));
        }
        let new = var(2)?;
        if new.0 as usize != expected {
            return Err(Error::parse(
                no,
                toks[2].0,
                format!("expected definition of variable {expected}"),
            ));
        }
        let (kind, arity) = match toks.get(1).map(|t| t.1) {
            Some("PROD") => (DefKind::Product(var(3)?, var(4)?), 5),
            Some("ALIAS") => (DefKind::Alias(var(3)?), 4),
            Some("CHAIN") => (DefKind::Chain(var(3)?, var(4)?), 5),
            Some("CONST") => {
                let c = match toks.get(3).map(|t| t.1) {
                    Some("0") => false,
                    Some("1") => true,
                    _ => return Err(Error::parse(no, 1, "DEF CONST needs 0 or 1")),
                };
                (DefKind::Const(c), 4)
            }
            _ => return Err(Error::parse(no, 5, "unknown definition kind")),
        };
        if toks.len() != arity {
            return Err(Error::parse(no, 1, "wrong number of operands"));
        }
        let origin = match kind {
            DefKind::Product(..) if padded.contains(&new) => Origin::Padding,
            DefKind::Product(..) => Origin::QuadratizeAux,
            DefKind::Alias(a) if a.0 as usize <= orig => Origin::RenameAux,
            DefKind::Alias(_) => Origin::CopyAux,
            DefKind::Chain(..) => Origin::ChainAux,
            DefKind::Const(_) if padded.contains(&new) => Origin::Padding,
            DefKind::Const(_) => Origin::Coefficient,
        };
        fresh_aux(&mut registry, origin);
        log.push(new, kind);
    }
    lines.finish()?;
    let sf = StandardFormSystem {
        quad_eqs,
        lin_eqs,
        registry,
        log,
        padding_triples: padding,
    };
    sf.check_invariants()
        .map_err(|e| Error::parse(1, 1, format!("not a valid standard form: {e}")))?;
    Ok(sf)
}

pub fn serialize_witness(v: &BitVector) -> String {
    format!("WITNESS {}\n{v}\n", v.len())
}

pub fn parse_witness(text: &str) -> Result<BitVector> {
    let mut lines = Lines::new(text)?;
    let (no, head) = lines.next("the WITNESS header")?;
    let len = match tokens(head).as_slice() {
        [(_, "WITNESS"), (col, len)] => parse_uint(no, *col, len)?,
        _ => return Err(Error::parse(no, 1, "expected \"WITNESS <len>\"")),
    };
    let v = match lines.peek() {
        Some(_) => {
            let (no, bits) = lines.next("the bit string")?;
            parse_bits(no, 1, bits, len, "witness")?
        }
        None => return Err(Error::parse(lines.line_no(), 1, "missing bit string")),
    };
    lines.finish()?;
    Ok(v)
}

/// `KEY value` lines describing a stored reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sidecar {
    pub entries: Vec<(String, String)>,
}

impl Sidecar {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::InvalidInstance(format!("metadata lacks key {key}")))
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Sidecar> {
        let lines = Lines::new(text)?;
        let mut out = Sidecar::default();
        for (i, line) in lines.lines.iter().enumerate() {
            let Some((k, v)) = line.split_once(' ') else {
                return Err(Error::parse(i + 1, 1, "expected \"KEY value\""));
            };
            if k.is_empty()
                || !k
                    .bytes()
                    .all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'_')
            {
                return Err(Error::parse(i + 1, 1, format!("malformed key {k:?}")));
            }
            if out.get(k).is_some() {
                return Err(Error::parse(i + 1, 1, format!("repeated key {k}")));
            }
            out.push(k, v);
        }
        Ok(out)
    }
}

/// Format identifier written into every sidecar.
pub const FORMAT_VERSION: &str = "mldmq-1";

fn range(r: &std::ops::Range<u32>) -> String {
    if r.is_empty() {
        "none".to_string()
    } else {
        format!("{}..{}", r.start, r.end - 1)
    }
}

pub fn alpha_sidecar(a: &AlphaArtifact) -> Sidecar {
    let mut s = Sidecar::default();
    s.push("REDUCTION", "alpha");
    s.push("VERSION", FORMAT_VERSION);
    s.push("SOURCE_N", a.source.n());
    s.push("SOURCE_M", a.source.m());
    s.push("SOURCE_T", a.source.t());
    s.push("ELL", a.layout.ell);
    s.push("V_RANGE", range(&a.layout.v_range));
    s.push("COUNTER_RANGE", range(&a.layout.counter_range));
    s.push("HWCE_AUX_RANGE", range(&a.layout.hwce_aux_range));
    s.push("WCE_AUX_RANGE", range(&a.layout.wce_aux_range));
    s.push("PCCE_EQUATIONS", a.pcce_equations);
    s.push("HWCE_EQUATIONS", a.hwce_equations);
    s.push("WCE_EQUATIONS", a.wce_equations);
    s.push("MQ_NVARS", a.mq.nvars());
    s.push("MQ_EQUATIONS", a.mq.num_equations());
    s
}

pub fn beta_sidecar(b: &BetaArtifact) -> Sidecar {
    let mut s = Sidecar::default();
    s.push("REDUCTION", "beta");
    s.push("VERSION", FORMAT_VERSION);
    s.push("GADGET", "G10x3:1001100111,0100011111,0011111111;EPS:0000000111");
    s.push("INJECTIVE", b.meta.injective as u8);
    s.push("Q", b.meta.q);
    s.push("LAMBDA", b.meta.lambda);
    s.push("PADDING", b.meta.padding_triples);
    s.push("SF_NVARS", b.sf.num_vars());
    s.push("SF_ORIG", b.sf.original_vars());
    s.push("SOURCE_NVARS", b.meta.source_nvars);
    s.push("SOURCE_EQUATIONS", b.meta.source_equations);
    s.push("MLD_N", b.mld.n());
    s.push("MLD_M", b.mld.m());
    s.push("MLD_T", b.mld.t());
    s.push("BLOCK", BLOCK);
    s.push("TAU_COLUMNS", "10b+1..10b+3");
    s.push("H_BITS", b.meta.h_bits);
    s.push("BOUND", b.meta.bound);
    s.push("BOUND_OK", b.meta.bound_holds() as u8);
    s
}

/// Parses a sum of products such as `x1*x2*x3 + x4 + 1` (factors may also
/// be separated by spaces). Repeated terms cancel.
pub fn parse_polynomial(expr: &str) -> Result<BooleanPolynomial> {
    let mut f = BooleanPolynomial::zero();
    let mut offset = 0;
    for term in expr.split('+') {
        let mut vars = Vec::new();
        let mut constant = None;
        for (col, tok) in tokens(&term.replace('*', " ")) {
            let col = offset + col;
            match tok {
                "1" => constant = Some(true),
                "0" => constant = Some(false),
                _ => {
                    let digits = tok
                        .strip_prefix('x')
                        .ok_or_else(|| Error::parse(1, col, format!("expected a variable like x3, found {tok:?}")))?;
                    let i = parse_uint(1, col + 1, digits)?;
                    if i == 0 {
                        return Err(Error::parse(1, col, "variables are numbered from 1"));
                    }
                    vars.push(VarId(i as u32));
                }
            }
        }
        offset += term.len() + 1;
        if vars.is_empty() && constant.is_none() {
            return Err(Error::parse(1, offset.saturating_sub(term.len()), "empty term"));
        }
        if constant != Some(false) {
            f.toggle(Monomial::from_vars(vars));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::reduce_beta;
    use crate::normalize::to_standard_form;

    #[test]
    fn mq_line_for_xy_plus_z() {
        let inst =
            MqInstance::with_default_names(3, vec![BooleanPolynomial::from_index_terms(&[&[1, 2], &[3]])]).unwrap();
        let text = serialize_mq(&inst);
        assert_eq!(text, "MQ\nn 3\nm 1\nEQ Q 1 2 ; L 3 ; C 0\n");
        assert_eq!(parse_mq(&text).unwrap(), inst);
    }

    #[test]
    fn empty_sections() {
        let inst = parse_mq("MQ\nn 2\nm 2\nEQ Q ; L ; C 1\nEQ Q 1 2 ; L ; C 0\n").unwrap();
        assert_eq!(inst.equations()[0], BooleanPolynomial::one());
    }

    #[test]
    fn mld_round_trip_and_errors() {
        let text = "MLD\nn 4\nm 2\nt 1\nH\n1100\n0011\ns 10\n";
        let inst = parse_mld(text).unwrap();
        assert_eq!(serialize_mld(&inst), text);
        let err = parse_mld("MLD\nn 4\nm 2\nt 1\nH\n1100\n001\ns 10\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 7, .. }), "{err}");
        assert!(err.to_string().contains("row 2"));
        assert!(matches!(
            parse_mld("MLD\nn 4\nm 1\nt 5\nH\n1100\ns 1\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_mld("MLD\nn 2\nm 1\nt 1\nH\n1200\ns 1\n"),
            Err(Error::Parse { line: 6, column: 2, .. })
        ));
        assert!(parse_mld("MLD\nn 2\nm 1\nt 1\nH\n\t10\ns 1\n").is_err());
        assert!(parse_mld("MLD\nn 2\nm 1\nt 1\nH\n10\ns 1").is_err());
        assert!(parse_mld("MLD\nn 2\nm 1\nt 1\nx 0\nH\n10\ns 1\n").is_err());
    }

    #[test]
    fn mld_without_checks() {
        let inst = MldInstance::new(BitMatrix::zeros(0, 3), BitVector::zeros(0), 1).unwrap();
        let text = serialize_mld(&inst);
        assert_eq!(parse_mld(&text).unwrap(), inst);
    }

    #[test]
    fn mq_rejects_out_of_range_and_unordered() {
        assert!(matches!(
            parse_mq("MQ\nn 2\nm 1\nEQ Q ; L 3 ; C 0\n"),
            Err(Error::Parse {
                line: 4,
                column: 10,
                ..
            })
        ));
        assert!(parse_mq("MQ\nn 3\nm 1\nEQ Q 2 1 ; L ; C 0\n").is_err());
        assert!(parse_mq("MQ\nn 3\nm 2\nEQ Q ; L ; C 0\n").is_err());
        assert!(parse_mq("MQ\nn 3\nm 1\nEQ Q ; L ; C 2\n").is_err());
    }

    #[test]
    fn sf_round_trip() {
        let inst = MqInstance::with_default_names(
            3,
            vec![
                BooleanPolynomial::from_index_terms(&[&[1, 2], &[1, 3], &[2], &[]]),
                BooleanPolynomial::from_index_terms(&[&[2, 3], &[1], &[3]]),
            ],
        )
        .unwrap();
        let sf = to_standard_form(&inst);
        let text = serialize_sf(&sf);
        let back = parse_sf(&text).unwrap();
        assert_eq!(back, sf);
        for id in sf.registry.ids() {
            assert_eq!(back.registry.origin(id), sf.registry.origin(id), "{id}");
        }
        assert_eq!(serialize_sf(&back), text);
    }

    #[test]
    fn sf_for_single_triple() {
        let sf = parse_sf("SF\nq 1\nlambda 0\norig 3\npadding 0\nT 1 2 3\n").unwrap();
        assert_eq!(sf.q(), 1);
        assert!(parse_sf("SF\nq 1\nlambda 0\norig 3\npadding 0\nT 1 2 2\n").is_err());
        assert!(parse_sf("SF\nq 1\nlambda 0\nbogus 3\npadding 0\nT 1 2 3\n").is_err());
    }

    #[test]
    fn witness_round_trip() {
        let v = BitVector::from_bits(&[0, 1, 1, 0]);
        let text = serialize_witness(&v);
        assert_eq!(text, "WITNESS 4\n0110\n");
        assert_eq!(parse_witness(&text).unwrap(), v);
        assert_eq!(parse_witness("WITNESS 0\n\n").unwrap(), BitVector::zeros(0));
        assert!(parse_witness("WITNESS 3\n0110\n").is_err());
    }

    #[test]
    fn detects_kinds() {
        assert_eq!(detect_kind("MLD\n").unwrap(), FileKind::Mld);
        assert_eq!(detect_kind("WITNESS 3\n").unwrap(), FileKind::Witness);
        assert!(detect_kind("XYZ\n").is_err());
    }

    #[test]
    fn sidecar_round_trip() {
        let inst =
            MqInstance::with_default_names(3, vec![BooleanPolynomial::from_index_terms(&[&[1, 2], &[3]])]).unwrap();
        let side = beta_sidecar(&reduce_beta(&inst, false));
        let back = Sidecar::parse(&side.serialize()).unwrap();
        assert_eq!(back, side);
        assert_eq!(back.get("MLD_N"), Some("10"));
        assert!(Sidecar::parse("lower case\n").is_err());
    }

    #[test]
    fn polynomial_expressions() {
        assert_eq!(
            parse_polynomial("x1 x2 x3 x4 + 1").unwrap(),
            BooleanPolynomial::from_index_terms(&[&[1, 2, 3, 4], &[]])
        );
        assert_eq!(
            parse_polynomial("x1*x2 + x3 + x3").unwrap(),
            BooleanPolynomial::from_index_terms(&[&[1, 2]])
        );
        assert!(parse_polynomial("x1 + + x2").is_err());
        assert!(parse_polynomial("y1").is_err());
        assert!(parse_polynomial("x0").is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::generators::{gen_mld, gen_mq, GenSpec};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn mld_round_trip(seed in any::<u64>(), n in 1usize..30, m in 0usize..12, tf in 0.0f64..=1.0, planted in any::<bool>()) {
            let t = (tf * n as f64) as usize;
            let inst = gen_mld(&GenSpec { seed, n, m, t, planted }).unwrap();
            prop_assert_eq!(parse_mld(&serialize_mld(&inst)).unwrap(), inst);
        }

        #[test]
        fn mq_round_trip(seed in any::<u64>(), n in 1usize..8, m in 1usize..6, planted in any::<bool>()) {
            let inst = gen_mq(&GenSpec { seed, n, m, t: 0, planted }).unwrap();
            prop_assert_eq!(parse_mq(&serialize_mq(&inst)).unwrap(), inst);
        }
    }
}
