//! Recursive-descent parser with name and index binding checks.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, ToPrimitive, Zero};

use super::ast::{AssertStmt, AtomRef, AxiomRule, IndexRef, Node, ScalarFactor, ScalarLit, Script, Span, Statement};
use super::lexer::{lex, Tok, Token};
use super::ParseError;
use crate::algebra::{AtomKind, Axis};
use crate::engine::BUILTIN_NAMES;

const KEYWORDS: [&str; 13] =
    ["axioms", "comm", "def", "commuting", "rel", "let", "assert", "under", "forall", "ddt", "sum", "delta", "Id"];
const ATOMS: [&str; 4] = ["Q", "P", "V", "H"];
const SCALARS: [&str; 3] = ["i", "hbar", "c"];

fn reserved(s: &str) -> bool {
    KEYWORDS.contains(&s) || ATOMS.contains(&s) || SCALARS.contains(&s)
}

pub fn parse(text: &str) -> Result<Script, ParseError> {
    let mut p = Parser::new(text)?;
    let mut statements = Vec::new();
    let mut spans = Vec::new();
    while p.peek() != &Tok::Eof {
        spans.push(p.span());
        statements.push(p.statement()?);
    }
    Ok(Script { statements, spans })
}

/// Parses a single closed expression (no lets, no free indices).
pub fn parse_expr(text: &str) -> Result<Node, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    sets: BTreeSet<String>,
    lets: BTreeSet<String>,
    bound: Vec<String>,
    /// Inside an axiom block unbound indices are implicitly quantified.
    free_indices: bool,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            sets: BUILTIN_NAMES.iter().map(|s| s.to_string()).collect(),
            lets: BTreeSet::new(),
            bound: Vec::new(),
            free_indices: false,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.span(), expected, self.peek().describe()))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("'{s}'"))
        }
    }

    fn keyword(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_ident(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("'{s}'"))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.error("an operator or end of input")
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.span();
                self.bump();
                Ok((s, span))
            }
            _ => self.error(what),
        }
    }

    fn fresh_name(&mut self, what: &str) -> Result<String, ParseError> {
        let (name, span) = self.ident(what)?;
        if reserved(&name) || self.sets.contains(&name) || self.lets.contains(&name) {
            return Err(ParseError::new(span, format!("{what} not already in use"), format!("'{name}'")));
        }
        Ok(name)
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == "axioms" => self.axioms(),
            Tok::Ident(s) if s == "let" => {
                self.bump();
                let name = self.fresh_name("a binding name")?;
                self.sym("=")?;
                let value = self.expr()?;
                self.sym(";")?;
                self.lets.insert(name.clone());
                Ok(Statement::Let { name, value })
            }
            Tok::Ident(s) if s == "assert" => Ok(Statement::Assert(self.assertion()?)),
            Tok::Ident(s) if s == "forall" => {
                self.bump();
                let mut vars = vec![self.index_var()?];
                while self.is_sym(",") {
                    self.bump();
                    let span = self.span();
                    let v = self.index_var()?;
                    if vars.contains(&v) {
                        return Err(ParseError::new(span, "a distinct index variable", format!("'{v}'")));
                    }
                    vars.push(v);
                }
                self.sym(":")?;
                self.bound = vars.clone();
                let assertion = self.assertion();
                self.bound.clear();
                Ok(Statement::Forall { vars, assertion: assertion? })
            }
            _ => self.error("'axioms', 'let', 'assert' or 'forall'"),
        }
    }

    fn assertion(&mut self) -> Result<AssertStmt, ParseError> {
        self.keyword("assert")?;
        let lhs = self.expr()?;
        self.sym("==")?;
        let rhs = self.expr()?;
        self.keyword("under")?;
        let (under, span) = self.ident("an axiom set name")?;
        if !self.sets.contains(&under) {
            return Err(ParseError::new(span, "a declared axiom set", format!("'{under}'")));
        }
        self.sym(";")?;
        Ok(AssertStmt { lhs, rhs, under })
    }

    fn axioms(&mut self) -> Result<Statement, ParseError> {
        self.keyword("axioms")?;
        let name = self.fresh_name("an axiom set name")?;
        self.sym("{")?;
        self.free_indices = true;
        let mut rules = Vec::new();
        let result = loop {
            if self.is_sym("}") {
                self.bump();
                break Ok(());
            }
            match self.axiom_rule() {
                Ok(r) => rules.push(r),
                Err(e) => break Err(e),
            }
        };
        self.free_indices = false;
        result?;
        self.sets.insert(name.clone());
        Ok(Statement::Axioms { name, rules })
    }

    fn axiom_rule(&mut self) -> Result<AxiomRule, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == "comm" => {
                self.bump();
                self.sym("(")?;
                let a = self.atom_ref()?;
                self.sym(",")?;
                let b = self.atom_ref()?;
                self.sym(")")?;
                self.sym("=")?;
                let v = self.expr()?;
                self.sym(";")?;
                Ok(AxiomRule::Comm(a, b, v))
            }
            Tok::Ident(s) if s == "def" => {
                self.bump();
                let a = self.atom_ref()?;
                self.sym("=")?;
                let v = self.expr()?;
                self.sym(";")?;
                Ok(AxiomRule::Def(a, v))
            }
            Tok::Ident(s) if s == "commuting" => {
                self.bump();
                self.sym("{")?;
                let mut kinds = vec![self.atom_kind()?];
                while self.is_sym(",") {
                    self.bump();
                    kinds.push(self.atom_kind()?);
                }
                self.sym("}")?;
                self.sym(";")?;
                Ok(AxiomRule::Commuting(kinds))
            }
            Tok::Ident(s) if s == "rel" => {
                self.bump();
                let a = self.expr()?;
                self.sym("=")?;
                let b = self.expr()?;
                self.sym(";")?;
                Ok(AxiomRule::Rel(a, b))
            }
            _ => self.error("'comm', 'def', 'commuting', 'rel' or '}'"),
        }
    }

    fn atom_kind(&mut self) -> Result<AtomKind, ParseError> {
        let kind = match self.peek() {
            Tok::Ident(s) if s == "H" => AtomKind::H,
            Tok::Ident(s) if s == "P" => AtomKind::P,
            Tok::Ident(s) if s == "V" => AtomKind::V,
            Tok::Ident(s) if s == "Q" => AtomKind::Q,
            _ => return self.error("an atom kind (H, P, V or Q)"),
        };
        self.bump();
        Ok(kind)
    }

    fn index_var(&mut self) -> Result<String, ParseError> {
        let (name, span) = self.ident("an index variable")?;
        if name != "i" && reserved(&name) {
            return Err(ParseError::new(span, "an index variable", format!("reserved word '{name}'")));
        }
        Ok(name)
    }

    fn index(&mut self) -> Result<IndexRef, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let Some(axis) = n.to_u8().and_then(Axis::new) else {
                    return self.error("an index 1, 2 or 3");
                };
                self.bump();
                Ok(IndexRef::Lit(axis))
            }
            Tok::Ident(_) => {
                let span = self.span();
                let v = self.index_var()?;
                if !self.free_indices && !self.bound.contains(&v) {
                    return Err(ParseError::new(span, "a bound index variable", format!("'{v}'")));
                }
                Ok(IndexRef::Var(v))
            }
            _ => self.error("an index"),
        }
    }

    fn signed_int(&mut self) -> Result<i32, ParseError> {
        let neg = self.is_sym("-");
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                let n = if neg { -n } else { n };
                let Some(k) = n.to_i32() else {
                    return self.error("an exponent that fits in 32 bits");
                };
                self.bump();
                Ok(k)
            }
            _ => self.error("an integer exponent"),
        }
    }

    fn atom_ref(&mut self) -> Result<AtomRef, ParseError> {
        let (name, _) = match self.peek() {
            Tok::Ident(s) if ATOMS.contains(&s.as_str()) || s == "Id" => self.ident("an atom")?,
            _ => return self.error("an atom (Q[..], P[..], V[..], H or Id)"),
        };
        match name.as_str() {
            "Id" => Ok(AtomRef::Id),
            "H" => {
                if self.is_sym("^") {
                    self.bump();
                    let span = self.span();
                    let k = self.signed_int()?;
                    if k == 0 {
                        return Err(ParseError::new(span, "a nonzero power", "'0'"));
                    }
                    Ok(AtomRef::H(k))
                } else {
                    Ok(AtomRef::H(1))
                }
            }
            kind => {
                self.sym("[")?;
                let i = self.index()?;
                self.sym("]")?;
                Ok(match kind {
                    "Q" => AtomRef::Q(i),
                    "P" => AtomRef::P(i),
                    _ => AtomRef::V(i),
                })
            }
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut acc = if self.is_sym("-") {
            self.bump();
            Node::Neg(self.term()?.boxed())
        } else {
            self.term()?
        };
        loop {
            if self.is_sym("+") {
                self.bump();
                acc = Node::Add(acc.boxed(), self.term()?.boxed());
            } else if self.is_sym("-") {
                self.bump();
                acc = Node::Sub(acc.boxed(), self.term()?.boxed());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut acc = self.factor()?;
        while self.is_sym("*") {
            self.bump();
            acc = Node::Mul(acc.boxed(), self.factor()?.boxed());
        }
        Ok(acc)
    }

    fn scalar_factor(&mut self) -> Result<ScalarFactor, ParseError> {
        let (name, _) = self.ident("'i', 'hbar' or 'c'")?;
        let exp = if self.is_sym("^") && name != "i" {
            self.bump();
            self.signed_int()?
        } else {
            1
        };
        Ok(match name.as_str() {
            "i" => ScalarFactor::I,
            "hbar" => ScalarFactor::Hbar(exp),
            _ => ScalarFactor::C(exp),
        })
    }

    fn next_is_scalar_factor(&self) -> bool {
        matches!(self.peek_at(1), Tok::Ident(s) if SCALARS.contains(&s.as_str()))
    }

    fn scalar(&mut self) -> Result<Node, ParseError> {
        let mut lit = ScalarLit { rational: None, factors: Vec::new() };
        if let Tok::Int(n) = self.peek().clone() {
            self.bump();
            let mut den = BigInt::from(1);
            if self.is_sym("/") {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(d) if !d.is_zero() => {
                        self.bump();
                        den = d;
                    }
                    _ => return self.error("a nonzero denominator"),
                }
            }
            lit.rational = Some(BigRational::new(n, den));
        } else {
            lit.factors.push(self.scalar_factor()?);
        }
        while self.is_sym("*") && self.next_is_scalar_factor() {
            self.bump();
            lit.factors.push(self.scalar_factor()?);
        }
        Ok(Node::Scalar(lit))
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        let tok = self.peek().clone();
        let span = self.span();
        match tok {
            Tok::Int(_) => self.scalar(),
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            Tok::Ident(s) => match s.as_str() {
                "i" | "hbar" | "c" => self.scalar(),
                "Q" | "P" | "V" | "H" | "Id" => Ok(Node::Atom(self.atom_ref()?)),
                "comm" => {
                    self.bump();
                    self.sym("(")?;
                    let a = self.expr()?;
                    self.sym(",")?;
                    let b = self.expr()?;
                    self.sym(")")?;
                    Ok(Node::Comm(a.boxed(), b.boxed()))
                }
                "ddt" => {
                    self.bump();
                    self.sym("(")?;
                    let a = self.expr()?;
                    self.sym(")")?;
                    Ok(Node::Ddt(a.boxed()))
                }
                "delta" => {
                    self.bump();
                    self.sym("(")?;
                    let a = self.index()?;
                    self.sym(",")?;
                    let b = self.index()?;
                    self.sym(")")?;
                    Ok(Node::Delta(a, b))
                }
                "sum" => self.sum(),
                _ if reserved(&s) => self.error("an expression"),
                _ if self.lets.contains(&s) => {
                    self.bump();
                    Ok(Node::Name(s))
                }
                _ => Err(ParseError::new(span, "a declared name", format!("'{s}'"))),
            },
            _ => self.error("an expression"),
        }
    }

    /// `sum(j, e)` expands to `e[j:=1] + e[j:=2] + e[j:=3]` right here.
    fn sum(&mut self) -> Result<Node, ParseError> {
        self.keyword("sum")?;
        self.sym("(")?;
        let var = self.index_var()?;
        self.sym(",")?;
        self.bound.push(var.clone());
        let body = self.expr();
        self.bound.pop();
        let body = body?;
        self.sym(")")?;
        let mut terms = Axis::ALL.into_iter().map(|a| body.bind(&var, a));
        let first = terms.next().expect("three axes");
        Ok(terms.fold(first, |acc, t| Node::Add(acc.boxed(), t.boxed())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forall_statement() {
        let s = parse("forall i,j: assert comm(Q[i],P[j]) == i*hbar*c^2*H^-2*P[i]*P[j] under Massless;").unwrap();
        assert_eq!(s.statements.len(), 1);
        match &s.statements[0] {
            Statement::Forall { vars, assertion } => {
                assert_eq!(vars, &["i".to_string(), "j".to_string()]);
                assert_eq!(assertion.under, "Massless");
                let Node::Mul(_, last) = &assertion.rhs else { panic!() };
                assert_eq!(**last, Node::Atom(AtomRef::P(IndexRef::Var("j".into()))));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn truncated_comm_reports_position() {
        let err = parse("assert comm(Q[1]").unwrap_err();
        assert_eq!(err.span, Span { line: 1, column: 17 });
        assert!(err.expected.contains("','"));
    }

    #[test]
    fn unbound_index_and_unknown_names() {
        assert!(parse("assert Q[k] == 0 under Massless;").is_err());
        assert!(parse("assert x == 0 under Massless;").is_err());
        assert!(parse("assert Q[1] == 0 under Nowhere;").is_err());
        assert!(parse("let c = P[1];").is_err());
        assert!(parse("assert Q[4] == 0 under Massless;").is_err());
    }

    #[test]
    fn sum_expands_eagerly() {
        let n = parse_expr("sum(j, V[j]*V[j])").unwrap();
        assert_eq!(n.to_string(), "V[1]*V[1] + V[2]*V[2] + V[3]*V[3]");
    }

    #[test]
    fn scalar_vocabulary() {
        let n = parse_expr("3/2*i*hbar^-1*c^2*Q[1]").unwrap();
        let Node::Mul(s, _) = n else { panic!() };
        let Node::Scalar(lit) = *s else { panic!() };
        assert_eq!(lit.factors, vec![ScalarFactor::I, ScalarFactor::Hbar(-1), ScalarFactor::C(2)]);
        assert!(parse_expr("1/0").is_err());
    }

    #[test]
    fn axiom_blocks_quantify_indices() {
        let s = parse("axioms A { commuting {H, P}; comm(Q[k], H) = i*hbar*V[k]; }\nassert 0 == 0 under A;").unwrap();
        assert_eq!(s.statements.len(), 2);
        assert!(parse("axioms Massless { }").is_err());
    }
}
