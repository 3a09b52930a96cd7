//! Parser for element expressions such as `1/2*S[e1.e2]S*[e3] - p[v]`.
//!
//! ```text
//! element  := ['-'] term (('+' | '-') term)*
//! term     := coeff | [coeff '*'] word+
//! word     := 'S[' edgelist ']' | 'S*[' edgelist ']' | 'p[' vertex ']'
//! edgelist := id ('.' id)*
//! coeff    := integer | integer '/' integer
//! ```
//!
//! Juxtaposed words multiply; a bare coefficient is a multiple of the unit.
//! A non-composable edge list denotes zero.

use std::sync::Arc;

use num::{BigInt, Zero as _};

use crate::algebra::{Element, Path, Word};
use crate::error::ExprError;
use crate::graph::Graph;
use crate::scalar::Rational;

pub fn parse_element(graph: &Arc<Graph>, text: &str) -> Result<Element<Rational>, ExprError> {
    let mut p = Parser {
        graph,
        chars: text.chars().collect(),
        pos: 0,
    };
    let el = p.element()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.syntax(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(el)
}

struct Parser<'a> {
    graph: &'a Arc<Graph>,
    chars: Vec<char>,
    pos: usize,
}

fn is_id_char(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '.' | '[' | ']'))
}

impl Parser<'_> {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn syntax(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            column: self.column(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected {c:?}")))
        }
    }

    fn element(&mut self) -> Result<Element<Rational>, ExprError> {
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.syntax("empty expression"));
        }
        let negative = self.eat('-');
        let mut acc = self.term()?;
        if negative {
            acc = -&acc;
        }
        loop {
            self.skip_ws();
            let sub = match self.peek() {
                Some('+') => false,
                Some('-') => true,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let t = self.term()?;
            acc = if sub { &acc - &t } else { &acc + &t };
        }
    }

    fn term(&mut self) -> Result<Element<Rational>, ExprError> {
        self.skip_ws();
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.coeff()?;
            self.skip_ws();
            if !self.eat('*') {
                // A bare coefficient is a multiple of the unit.
                if matches!(self.peek(), None | Some('+' | '-')) {
                    return Ok(Element::unit(self.graph).scale(c));
                }
                return Err(self.syntax("expected '*'"));
            }
            Some(c)
        } else {
            None
        };
        self.skip_ws();
        let mut product = self.word()?;
        loop {
            self.skip_ws();
            if !matches!(self.peek(), Some('S' | 'p')) {
                break;
            }
            product = &product * &self.word()?;
        }
        Ok(match coeff {
            Some(c) => product.scale(c),
            None => product,
        })
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn coeff(&mut self) -> Result<Rational, ExprError> {
        let n = self.integer()?;
        if !self.eat('/') {
            return Ok(Rational::from_integer(n));
        }
        let at = self.pos;
        let d = self.integer()?;
        if d.is_zero() {
            return Err(ExprError::Syntax {
                column: at + 1,
                message: "zero denominator".into(),
            });
        }
        Ok(Rational::new(n, d))
    }

    fn id(&mut self) -> Result<(usize, String), ExprError> {
        let start = self.pos;
        while self.peek().is_some_and(is_id_char) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected identifier"));
        }
        Ok((start + 1, self.chars[start..self.pos].iter().collect()))
    }

    fn edge_list(&mut self) -> Result<Vec<usize>, ExprError> {
        let mut edges = Vec::new();
        loop {
            let (column, id) = self.id()?;
            match self.graph.edge_index(&id) {
                Some(e) => edges.push(e),
                None => return Err(ExprError::UnknownEdge { column, id }),
            }
            if !self.eat('.') {
                return Ok(edges);
            }
        }
    }

    fn word(&mut self) -> Result<Element<Rational>, ExprError> {
        let g = self.graph;
        match self.peek() {
            Some('p') => {
                self.pos += 1;
                self.expect('[')?;
                let (column, id) = self.id()?;
                let v = g
                    .vertex_index(&id)
                    .ok_or(ExprError::UnknownVertex { column, id })?;
                self.expect(']')?;
                Ok(Element::projection(g, v))
            }
            Some('S') => {
                self.pos += 1;
                let star = self.eat('*');
                self.expect('[')?;
                let edges = self.edge_list()?;
                self.expect(']')?;
                Ok(match Path::new(g, edges) {
                    Some(p) if star => Element::from_word(g, Word::annihilation(p)),
                    Some(p) => Element::from_word(g, Word::creation(p)),
                    None => Element::zero(g),
                })
            }
            _ => Err(self.syntax("expected S[...], S*[...] or p[...]")),
        }
    }
}
