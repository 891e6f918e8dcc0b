//! Text format for modules (`.dlpm`) and model sets.
//!
//! One statement per line, each terminated by `.`; `%` starts a comment.
//!
//! ```text
//! #module m.
//! #input a, c.
//! #output b.
//! #hidden d.
//! a | b :- c.
//! d :- a, not d.
//! ```

use crate::error::{Error, Result};
use crate::model::{
    validate_module, Atom, AtomSet, DlpFunction, Interpretation, ModelSet, Rule, RuleSet,
    RESERVED_PREFIX,
};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept atoms in the reserved `@` namespace, as produced by
    /// transformations such as body naming or the equivalence translation.
    pub allow_reserved: bool,
}

/// A parsed module together with its optional `#module` name.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleDocument {
    pub name: Option<String>,
    pub module: DlpFunction,
}

pub fn parse_module(text: &str) -> Result<DlpFunction> {
    parse_document(text, ParseOptions::default()).map(|d| d.module)
}

pub fn parse_module_with(text: &str, options: ParseOptions) -> Result<DlpFunction> {
    parse_document(text, options).map(|d| d.module)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Directive {
    Input,
    Output,
    Hidden,
}

impl Directive {
    fn name(self) -> &'static str {
        match self {
            Directive::Input => "input",
            Directive::Output => "output",
            Directive::Hidden => "hidden",
        }
    }
}

enum Statement {
    Module(String),
    Declare(Directive, Vec<Atom>),
    Rule(Rule, Vec<Atom>),
}

pub fn parse_document(text: &str, options: ParseOptions) -> Result<ModuleDocument> {
    let mut name = None;
    let mut module_line = None;
    let mut declared: [Option<AtomSet>; 3] = [None, None, None];
    let mut seen = BTreeSet::new();
    let mut rules = RuleSet::new();
    let mut occurrences: Vec<(usize, Vec<Atom>)> = Vec::new();

    for (index, line) in text.split('\n').enumerate() {
        let line_no = index + 1;
        for statement in parse_line(line, line_no, false)? {
            match statement {
                Statement::Module(n) => {
                    if module_line.is_some() {
                        return Err(Error::DuplicateDirective {
                            directive: "module".into(),
                            line: line_no,
                        });
                    }
                    module_line = Some(line_no);
                    name = Some(n);
                }
                Statement::Declare(kind, atoms) => {
                    let slot = &mut declared[kind as usize];
                    if slot.is_some() {
                        return Err(Error::DuplicateDirective {
                            directive: kind.name().into(),
                            line: line_no,
                        });
                    }
                    let mut set = AtomSet::new();
                    for atom in atoms {
                        if !seen.insert(atom.clone()) {
                            return Err(Error::DuplicateDeclaration {
                                atom,
                                line: line_no,
                            });
                        }
                        set.insert(atom);
                    }
                    *slot = Some(set);
                }
                Statement::Rule(rule, atoms) => {
                    occurrences.push((line_no, atoms));
                    rules.insert(rule);
                }
            }
        }
    }

    for (line, atoms) in occurrences {
        if let Some(atom) = atoms.into_iter().find(|a| !seen.contains(a)) {
            return Err(Error::UndeclaredAtom { atom, line });
        }
    }

    let [input, output, hidden] = declared.map(Option::unwrap_or_default);
    let module = if options.allow_reserved {
        DlpFunction::new(rules, input, output, hidden)?
    } else {
        validate_module(rules, input, output, hidden)?
    };
    Ok(ModuleDocument { name, module })
}

/// Parses a sequence of rules with no declarations, e.g. `"a | b. b :- a."`.
/// Several statements may share a line.
pub fn parse_rules(text: &str) -> Result<RuleSet> {
    let mut rules = RuleSet::new();
    for (index, line) in text.split('\n').enumerate() {
        for statement in parse_line(line, index + 1, true)? {
            match statement {
                Statement::Rule(rule, _) => {
                    rules.insert(rule);
                }
                _ => {
                    return Err(Error::Syntax {
                        line: index + 1,
                        column: 1,
                        message: "directives are not allowed here".into(),
                    })
                }
            }
        }
    }
    Ok(rules)
}

/// Parses a single rule; the trailing `.` is optional.
pub fn parse_rule(text: &str) -> Result<Rule> {
    let trimmed = text.trim();
    let owned;
    let text = if trimmed.ends_with('.') {
        trimmed
    } else {
        owned = format!("{trimmed}.");
        &owned
    };
    let mut rules = parse_rules(text)?;
    match (rules.len(), rules.pop_first()) {
        (1, Some(rule)) => Ok(rule),
        _ => Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "expected exactly one rule".into(),
        }),
    }
}

/// Parses an interpretation written as `{a, b}`, `a, b` or `{}`.
pub fn parse_interpretation(text: &str) -> Result<Interpretation> {
    let chars: Vec<char> = text.chars().collect();
    let mut cur = Cursor::new(&chars, 1);
    cur.skip_ws();
    let braced = cur.eat('{');
    let mut set = AtomSet::new();
    cur.skip_ws();
    if !(braced && cur.peek() == Some('}')) && !cur.at_end() {
        loop {
            cur.skip_ws();
            set.insert(cur.atom()?);
            cur.skip_ws();
            if !cur.eat(',') {
                break;
            }
        }
    }
    cur.skip_ws();
    if braced && !cur.eat('}') {
        return Err(cur.error("expected `}`"));
    }
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(set)
}

fn parse_line(line: &str, line_no: usize, multi: bool) -> Result<Vec<Statement>> {
    let mut chars: Vec<char> = line.chars().collect();
    if let Some(cut) = chars.iter().position(|&c| c == '%') {
        chars.truncate(cut);
    }
    let mut cur = Cursor::new(&chars, line_no);
    let mut out = Vec::new();
    loop {
        cur.skip_ws();
        if cur.at_end() {
            return Ok(out);
        }
        if !multi && !out.is_empty() {
            return Err(cur.error("only one statement per line is allowed"));
        }
        out.push(cur.statement()?);
        cur.skip_ws();
        if !cur.eat('.') {
            return Err(cur.error("expected `.`"));
        }
    }
}

struct Cursor<'a> {
    chars: &'a [char],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(chars: &'a [char], line: usize) -> Self {
        Cursor {
            chars,
            pos: 0,
            line,
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars())
        {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if f(c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn statement(&mut self) -> Result<Statement> {
        if self.eat('#') {
            let start = self.pos;
            let keyword = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
            let kind = match keyword.as_str() {
                "module" => {
                    self.skip_ws();
                    let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                    if name.is_empty() {
                        return Err(self.error("expected a module name"));
                    }
                    return Ok(Statement::Module(name));
                }
                "input" => Directive::Input,
                "output" => Directive::Output,
                "hidden" => Directive::Hidden,
                _ => {
                    self.pos = start;
                    return Err(self.error("unknown directive"));
                }
            };
            let mut atoms = Vec::new();
            self.skip_ws();
            if self.peek() != Some('.') {
                loop {
                    self.skip_ws();
                    atoms.push(self.atom()?);
                    self.skip_ws();
                    if !self.eat(',') {
                        break;
                    }
                }
            }
            return Ok(Statement::Declare(kind, atoms));
        }

        let mut occurrences = Vec::new();
        let mut head = AtomSet::new();
        if !self.at_rule_arrow() {
            loop {
                self.skip_ws();
                let atom = self.atom()?;
                occurrences.push(atom.clone());
                head.insert(atom);
                self.skip_ws();
                if !self.eat('|') {
                    break;
                }
            }
        }
        self.skip_ws();
        let mut pos = AtomSet::new();
        let mut neg = AtomSet::new();
        if self.eat_str(":-") {
            self.skip_ws();
            if self.peek() != Some('.') && !self.at_end() {
                loop {
                    self.skip_ws();
                    let negated = self.negation();
                    let atom = self.atom()?;
                    occurrences.push(atom.clone());
                    if negated {
                        neg.insert(atom);
                    } else {
                        pos.insert(atom);
                    }
                    self.skip_ws();
                    if !self.eat(',') {
                        break;
                    }
                }
            }
        } else if head.is_empty() {
            return Err(self.error("expected a rule"));
        }
        Ok(Statement::Rule(Rule::new(head, pos, neg), occurrences))
    }

    fn at_rule_arrow(&mut self) -> bool {
        let save = self.pos;
        self.skip_ws();
        let found = self.eat_str(":-");
        self.pos = save;
        found
    }

    /// Consumes `not` followed by whitespace.
    fn negation(&mut self) -> bool {
        let save = self.pos;
        if self.eat_str("not") && matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.skip_ws();
            true
        } else {
            self.pos = save;
            false
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let start = self.pos;
        let mut name = match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.take_while(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            Some(RESERVED_PREFIX) => {
                self.pos += 1;
                let rest = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '@');
                if rest.is_empty() {
                    self.pos = start;
                    return Err(self.error("expected an atom"));
                }
                format!("{RESERVED_PREFIX}{rest}")
            }
            _ => return Err(self.error("expected an atom")),
        };
        if name == "not" {
            self.pos = start;
            return Err(self.error("`not` cannot be used as an atom"));
        }
        if self.eat('(') {
            name.push('(');
            loop {
                let arg = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                if arg.is_empty() {
                    return Err(self.error("expected an argument"));
                }
                name.push_str(&arg);
                if self.eat(',') {
                    name.push(',');
                } else if self.eat(')') {
                    name.push(')');
                    break;
                } else {
                    return Err(self.error("expected `,` or `)`"));
                }
            }
        }
        Ok(Atom::new(name))
    }
}

fn render_list(out: &mut String, directive: &str, atoms: &AtomSet) {
    if atoms.is_empty() {
        return;
    }
    let names: Vec<&str> = atoms.iter().map(Atom::name).collect();
    out.push_str(&format!("#{directive} {}.\n", names.join(", ")));
}

/// Canonical text: directives in input/output/hidden order (empty ones
/// omitted), then the rules in canonical order, one per line.
pub fn render_module(module: &DlpFunction) -> String {
    let mut out = String::new();
    render_list(&mut out, "input", module.input());
    render_list(&mut out, "output", module.output());
    render_list(&mut out, "hidden", module.hidden());
    for rule in module.rules() {
        out.push_str(&format!("{rule}.\n"));
    }
    out
}

pub fn render_document(document: &ModuleDocument) -> String {
    match &document.name {
        Some(name) => format!("#module {name}.\n{}", render_module(&document.module)),
        None => render_module(&document.module),
    }
}

/// One model per line in canonical order, without a trailing newline.
pub fn render_models(models: &ModelSet) -> String {
    models.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::atom_set;

    const EX23: &str = "#input a, c.\n#output b.\n#hidden d.\na | b :- c.\nd :- a, not d.\n";

    #[test]
    fn parses_example_module() {
        let m = parse_module(EX23).unwrap();
        assert_eq!(m.input(), &atom_set(["a", "c"]));
        assert_eq!(m.output(), &atom_set(["b"]));
        assert_eq!(m.hidden(), &atom_set(["d"]));
        assert_eq!(m.rules().len(), 2);
        assert_eq!(render_module(&m), EX23);
    }

    #[test]
    fn empty_text() {
        assert_eq!(parse_module("").unwrap(), DlpFunction::empty());
        assert_eq!(render_module(&DlpFunction::empty()), "");
    }

    #[test]
    fn undeclared() {
        let err = parse_module("a | b :- c.").unwrap_err();
        assert_eq!(err.kind(), "UndeclaredAtom");
        // Declarations after use are fine.
        assert!(parse_module("a :- b.\n#output a, b.").is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_module("#output a.\na :- ").unwrap_err() {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            e => panic!("{e:?}"),
        }
        match parse_module("#output a.\na :- B.").unwrap_err() {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (2, 6)),
            e => panic!("{e:?}"),
        }
        assert_eq!(parse_module("#output a. a.").unwrap_err().kind(), "SyntaxError");
        assert_eq!(parse_module("#foo a.").unwrap_err().kind(), "SyntaxError");
        assert_eq!(parse_module("#output not.").unwrap_err().kind(), "SyntaxError");
    }

    #[test]
    fn duplicates() {
        assert_eq!(
            parse_module("#output a.\n#output b.").unwrap_err().kind(),
            "DuplicateDirective"
        );
        assert_eq!(
            parse_module("#input a.\n#output a.").unwrap_err().kind(),
            "DuplicateDeclaration"
        );
    }

    #[test]
    fn comments_names_and_arguments() {
        let doc = parse_document(
            "% header\n#module sat.\n#input act(1), act(2).\n#output x1.\n:- x1, act(1). % c\nx1 :- act(2).\n",
            ParseOptions::default(),
        )
        .unwrap();
        assert_eq!(doc.name.as_deref(), Some("sat"));
        assert!(doc.module.input().contains(&Atom::new("act(1)")));
        let text = render_document(&doc);
        assert_eq!(
            text,
            "#module sat.\n#input act(1), act(2).\n#output x1.\n:- act(1), x1.\nx1 :- act(2).\n"
        );
        assert_eq!(parse_document(&text, ParseOptions::default()).unwrap(), doc);
    }

    #[test]
    fn reserved_atoms() {
        let text = "#output a.\n#hidden @bd_0.\n@bd_0.\na :- @bd_0.\n";
        assert_eq!(parse_module(text).unwrap_err().kind(), "ReservedAtom");
        let m = parse_module_with(text, ParseOptions { allow_reserved: true }).unwrap();
        assert_eq!(render_module(&m), text);
    }

    #[test]
    fn constraint_and_fact_forms() {
        let rules = parse_rules(":- a, not c. a | b. :-.").unwrap();
        let shown: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, vec![":-", ":- a, not c", "a | b"]);
        assert_eq!(parse_rule("b | a :- not c").unwrap(), parse_rule("a | b :- not c.").unwrap());
    }

    #[test]
    fn interpretations() {
        assert_eq!(parse_interpretation("{}").unwrap(), AtomSet::new());
        assert_eq!(parse_interpretation("").unwrap(), AtomSet::new());
        assert_eq!(
            parse_interpretation("{a, act(2)}").unwrap(),
            atom_set(["a", "act(2)"])
        );
        assert_eq!(parse_interpretation("c,a").unwrap(), atom_set(["a", "c"]));
        assert!(parse_interpretation("{a").is_err());
    }

    #[test]
    fn models_rendering() {
        let ms: ModelSet = [AtomSet::new()].into_iter().collect();
        assert_eq!(render_models(&ms), "{}");
        assert_eq!(render_models(&ModelSet::new()), "");
    }
}
