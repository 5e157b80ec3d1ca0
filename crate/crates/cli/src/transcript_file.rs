//! The `%%bbt v1` transcript format.
//!
//! Message payloads are sequences of typed items: `word <w>`, `int <x>`,
//! `vec <len> <entries>`, `mat <rows> <cols> <entries row by row>` and
//! `poly <deg> <coefficients>`.

use std::fmt::Write as _;

use bbcert::certify::{CostMeters, Item, Message, MsgKind, Role, Transcript};
use bbcert::epsilon::Epsilon;
use bbcert::field::Poly;
use bbcert::matrix::Matrix;

use crate::text::{join, poly_text, FormatError, Lines};

pub const TRANSCRIPT_HEADER: &str = "%%bbt v1";

pub fn transcript_text(t: &Transcript) -> String {
    let mut out = String::new();
    writeln!(out, "{TRANSCRIPT_HEADER}\nseed {}\nepsilon {}", t.seed, t.eps).unwrap();
    for m in &t.messages {
        write!(out, "msg {} {} {}", m.round, m.role, m.kind).unwrap();
        for item in &m.items {
            out.push(' ');
            out.push_str(&item_text(item));
        }
        out.push('\n');
    }
    let c = &t.costs;
    writeln!(
        out,
        "cost prover-fieldops={} verifier-fieldops={} prover-apps={} verifier-apps={} comm-elems={}",
        c.prover_field_ops, c.verifier_field_ops, c.prover_apps, c.verifier_apps, c.comm_elems
    )
    .unwrap();
    writeln!(out, "verdict {}", if t.accepted { "accept" } else { "reject" }).unwrap();
    out
}

fn item_text(item: &Item) -> String {
    match item {
        Item::Word(w) => format!("word {w}"),
        Item::Int(x) => format!("int {x}"),
        Item::Vector(v) if v.is_empty() => "vec 0".to_string(),
        Item::Vector(v) => format!("vec {} {}", v.len(), join(v)),
        Item::Matrix(m) if m.data().is_empty() => format!("mat {} {}", m.rows(), m.cols()),
        Item::Matrix(m) => format!("mat {} {} {}", m.rows(), m.cols(), join(m.data())),
        Item::Poly(p) => poly_text(p),
    }
}

pub fn parse_transcript(text: &str) -> Result<Transcript, FormatError> {
    let mut lines = Lines::new(text);
    if lines.next()?.join(" ") != TRANSCRIPT_HEADER {
        return Err(lines.err(format!("expected header `{TRANSCRIPT_HEADER}`")));
    }
    let seed: u64 = lines.value("seed")?;
    let eps_tok = lines.expect("epsilon")?;
    let eps: Epsilon = match eps_tok.as_slice() {
        [e] => e.parse().map_err(|_| lines.err(format!("bad epsilon `{e}`")))?,
        _ => return Err(lines.err("`epsilon` takes one value")),
    };
    let mut messages = Vec::new();
    while lines.peek_key() == Some("msg") {
        let toks = lines.expect("msg")?;
        if toks.len() < 3 {
            return Err(lines.err("expected `msg <round> <role> <kind> <payload>`"));
        }
        let round: u32 = lines.num(toks[0])?;
        let role = match toks[1] {
            "prover" => Role::Prover,
            "verifier" => Role::Verifier,
            r => return Err(lines.err(format!("unknown role `{r}`"))),
        };
        let kind = match toks[2] {
            "commit" => MsgKind::Commit,
            "challenge" => MsgKind::Challenge,
            "response" => MsgKind::Response,
            "verdict" => MsgKind::Verdict,
            k => return Err(lines.err(format!("unknown message kind `{k}`"))),
        };
        let items = parse_items(&lines, &toks[3..])?;
        messages.push(Message::new(round, role, kind, items));
    }
    let cost = lines.expect("cost")?;
    let mut vals = [0u64; 5];
    let keys = ["prover-fieldops", "verifier-fieldops", "prover-apps", "verifier-apps", "comm-elems"];
    if cost.len() != keys.len() {
        return Err(lines.err("`cost` takes five key=value pairs"));
    }
    for ((tok, key), slot) in cost.iter().zip(keys).zip(vals.iter_mut()) {
        let value = tok
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| lines.err(format!("expected `{key}=<N>`")))?;
        *slot = lines.num(value)?;
    }
    let costs = CostMeters {
        prover_field_ops: vals[0],
        verifier_field_ops: vals[1],
        prover_apps: vals[2],
        verifier_apps: vals[3],
        comm_elems: vals[4],
    };
    let verdict = lines.expect("verdict")?;
    let accepted = match verdict.as_slice() {
        ["accept"] => true,
        ["reject"] => false,
        _ => return Err(lines.err("expected `verdict accept|reject`")),
    };
    lines.finish()?;
    Ok(Transcript { seed, eps, messages, costs, accepted })
}

fn parse_items(lines: &Lines<'_>, toks: &[&str]) -> Result<Vec<Item>, FormatError> {
    let mut items = Vec::new();
    let mut i = 0;
    let take = |i: usize, len: usize| -> Result<Vec<u64>, FormatError> {
        let end = i.checked_add(len).filter(|&e| e <= toks.len()).ok_or_else(|| lines.err("truncated payload"))?;
        lines.nums(&toks[i..end])
    };
    while i < toks.len() {
        let arg = |j: usize| toks.get(i + j).copied().ok_or_else(|| lines.err("truncated payload"));
        match toks[i] {
            "word" => {
                items.push(Item::Word(arg(1)?.to_string()));
                i += 2;
            }
            "int" => {
                items.push(Item::Int(lines.num(arg(1)?)?));
                i += 2;
            }
            "vec" => {
                let len: usize = lines.num(arg(1)?)?;
                items.push(Item::Vector(take(i + 2, len)?));
                i += 2 + len;
            }
            "mat" => {
                let (r, c): (usize, usize) = (lines.num(arg(1)?)?, lines.num(arg(2)?)?);
                let len = r.checked_mul(c).ok_or_else(|| lines.err("matrix too large"))?;
                items.push(Item::Matrix(Matrix::from_vec(r, c, take(i + 3, len)?)));
                i += 3 + len;
            }
            "poly" => {
                let deg: i64 = lines.num(arg(1)?)?;
                if deg < -1 {
                    return Err(lines.err("polynomial degree below -1"));
                }
                let len = (deg + 1) as usize;
                let coeffs = take(i + 2, len)?;
                if len > 0 && coeffs[len - 1] == 0 {
                    return Err(lines.err("leading coefficient is zero"));
                }
                items.push(Item::Poly(Poly::from_coeffs(coeffs)));
                i += 2 + len;
            }
            other => return Err(lines.err(format!("unknown payload item `{other}`"))),
        }
    }
    Ok(items)
}
