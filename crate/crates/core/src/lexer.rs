//! Source text to token stream.
//!
//! Lexing runs in two passes. The first pass walks characters and produces
//! raw pieces (words, literals, markers, separators) while handling comments,
//! line continuations and separator collapsing. The second pass folds runs of
//! words into multi-word keyword tokens using the phrase table, longest
//! phrase first.

use std::fmt;

use thiserror::Error;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

macro_rules! keywords {
    ($( $variant:ident => $name:literal : [$($word:literal),+] $(| [$($alias:literal),+])? ;)*) => {
        /// Keyword identities. Multi-word keywords are a single identity.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Keyword {
            $($variant,)*
        }

        impl Keyword {
            pub const ALL: &'static [Keyword] = &[$(Keyword::$variant,)*];

            /// Stable upper-snake name used in token dumps.
            pub fn name(self) -> &'static str {
                match self {
                    $(Keyword::$variant => $name,)*
                }
            }

            /// Canonical surface spelling.
            pub fn spelling(self) -> &'static str {
                match self {
                    $(Keyword::$variant => concat_words!($($word),+),)*
                }
            }
        }

        /// Every accepted phrase, including alternate spellings.
        pub static PHRASES: &[KeywordPhrase] = &[
            $(
                KeywordPhrase { words: &[$($word),+], kind: Keyword::$variant },
                $( KeywordPhrase { words: &[$($alias),+], kind: Keyword::$variant }, )?
            )*
        ];
    };
}

macro_rules! concat_words {
    ($first:literal $(, $rest:literal)*) => {
        concat!($first $(, " ", $rest)*)
    };
}

/// A keyword's word sequence. `?` counts as a word so that `O RLY?` and
/// `WTF?` are ordinary phrases.
#[derive(Debug, Clone, Copy)]
pub struct KeywordPhrase {
    pub words: &'static [&'static str],
    pub kind: Keyword,
}

keywords! {
    Hai => "HAI": ["HAI"];
    Kthxbye => "KTHXBYE": ["KTHXBYE"];
    CanHas => "CAN_HAS": ["CAN", "HAS"];
    Query => "QUERY": ["?"];
    Visible => "VISIBLE": ["VISIBLE"];
    Gimmeh => "GIMMEH": ["GIMMEH"];
    IHasA => "I_HAS_A": ["I", "HAS", "A"];
    WeHasA => "WE_HAS_A": ["WE", "HAS", "A"];
    Itz => "ITZ": ["ITZ"];
    ItzA => "ITZ_A": ["ITZ", "A"];
    ItzSrslyA => "ITZ_SRSLY_A": ["ITZ", "SRSLY", "A"];
    ItzSrslyLotzA => "ITZ_SRSLY_LOTZ_A": ["ITZ", "SRSLY", "LOTZ", "A"];
    TharIz => "THAR_IZ": ["THAR", "IZ"];
    ImSharinIt => "IM_SHARIN_IT": ["IM", "SHARIN", "IT"];
    R => "R": ["R"];
    An => "AN": ["AN"];
    AnStuff => "AN_STUFF": ["AN", "STUFF"];
    BothSaem => "BOTH_SAEM": ["BOTH", "SAEM"];
    Diffrint => "DIFFRINT": ["DIFFRINT"];
    Bigger => "BIGGER": ["BIGGER"];
    Smallr => "SMALLR": ["SMALLR"];
    SumOf => "SUM_OF": ["SUM", "OF"];
    DiffOf => "DIFF_OF": ["DIFF", "OF"];
    ProduktOf => "PRODUKT_OF": ["PRODUKT", "OF"];
    QuoshuntOf => "QUOSHUNT_OF": ["QUOSHUNT", "OF"];
    ModOf => "MOD_OF": ["MOD", "OF"];
    SquarOf => "SQUAR_OF": ["SQUAR", "OF"];
    UnsquarOf => "UNSQUAR_OF": ["UNSQUAR", "OF"];
    FlipOf => "FLIP_OF": ["FLIP", "OF"];
    Maek => "MAEK": ["MAEK"];
    A => "A": ["A"];
    IsNowA => "IS_NOW_A": ["IS", "NOW", "A"];
    Srs => "SRS": ["SRS"];
    ORly => "O_RLY": ["O", "RLY", "?"];
    YaRly => "YA_RLY": ["YA", "RLY"];
    NoWai => "NO_WAI": ["NO", "WAI"];
    Oic => "OIC": ["OIC"];
    Wtf => "WTF": ["WTF", "?"];
    Omg => "OMG": ["OMG"];
    Omgwtf => "OMGWTF": ["OMGWTF"];
    Gtfo => "GTFO": ["GTFO"];
    ImInYr => "IM_IN_YR": ["IM", "IN", "YR"];
    ImOuttaYr => "IM_OUTTA_YR": ["IM", "OUTTA", "YR"];
    UppinYr => "UPPIN_YR": ["UPPIN", "YR"];
    NerfinYr => "NERFIN_YR": ["NERFIN", "YR"];
    Til => "TIL": ["TIL"];
    Wile => "WILE": ["WILE"];
    Win => "WIN": ["WIN"];
    Fail => "FAIL": ["FAIL"];
    Noob => "NOOB": ["NOOB"];
    Troof => "TROOF": ["TROOF"];
    Numbr => "NUMBR": ["NUMBR"];
    Numbar => "NUMBAR": ["NUMBAR"];
    Yarn => "YARN": ["YARN"];
    Troofs => "TROOFS": ["TROOFS"];
    Numbrs => "NUMBRS": ["NUMBRS"];
    Numbars => "NUMBARS": ["NUMBARS"];
    Yarns => "YARNS": ["YARNS"];
    Me => "ME": ["ME"];
    MahFrenz => "MAH_FRENZ": ["MAH", "FRENZ"];
    Mah => "MAH": ["MAH"];
    Ur => "UR": ["UR"];
    ImSrslyMesinWif => "IM_SRSLY_MESIN_WIF": ["IM", "SRSLY", "MESIN", "WIF"];
    ImMesinWif => "IM_MESIN_WIF": ["IM", "MESIN", "WIF"];
    DunMesinWif => "DUN_MESIN_WIF": ["DUN", "MESIN", "WIF"];
    Hugz => "HUGZ": ["HUGZ"];
    TxtMahBff => "TXT_MAH_BFF": ["TXT", "MAH", "BFF"] | ["TXN", "MAH", "BFF"];
    Ttyl => "TTYL": ["TTYL"];
    Whatevr => "WHATEVR": ["WHATEVR"];
    Whatevar => "WHATEVAR": ["WHATEVAR"];
}

impl Keyword {
    fn ends_expression(self) -> bool {
        use Keyword::*;
        matches!(
            self,
            Me | MahFrenz
                | Whatevr
                | Whatevar
                | Win
                | Fail
                | Noob
                | Troof
                | Numbr
                | Numbar
                | Yarn
                | Troofs
                | Numbrs
                | Numbars
                | Yarns
        )
    }
}

/// Separator flavour. The parser lets newlines (but never commas) sit
/// between a binary operator and its operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepKind {
    Newline,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(String),
    Numbr(i64),
    Numbar(f64),
    /// Decoded string contents (escapes resolved).
    Yarn(String),
    Separator(SepKind),
    /// `'Z` array-index marker.
    Index,
}

impl TokenKind {
    /// Short label used by the token dump.
    pub fn label(&self) -> String {
        match self {
            TokenKind::Keyword(k) => format!("KW:{}", k.name()),
            TokenKind::Ident(_) => "IDENT".into(),
            TokenKind::Numbr(_) => "NUMBR".into(),
            TokenKind::Numbar(_) => "NUMBAR".into(),
            TokenKind::Yarn(_) => "YARN".into(),
            TokenKind::Separator(_) => "SEP".into(),
            TokenKind::Index => "INDEX".into(),
        }
    }

    /// Same variant and same keyword, ignoring literal payloads.
    pub fn same_shape(&self, other: &TokenKind) -> bool {
        match (self, other) {
            (TokenKind::Keyword(a), TokenKind::Keyword(b)) => a == b,
            (TokenKind::Separator(_), TokenKind::Separator(_)) => true,
            _ => std::mem::discriminant(self) == std::mem::discriminant(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source lexeme. For multi-word keywords the words joined by one space.
    pub text: String,
    pub span: Span,
}

impl Token {
    fn ends_expression(&self) -> bool {
        match &self.kind {
            TokenKind::Keyword(k) => k.ends_expression(),
            TokenKind::Ident(_)
            | TokenKind::Numbr(_)
            | TokenKind::Numbar(_)
            | TokenKind::Yarn(_) => true,
            TokenKind::Separator(_) | TokenKind::Index => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

impl LexError {
    fn new(span: Span, message: impl Into<String>) -> Self {
        LexError {
            span,
            message: message.into(),
        }
    }
}

#[derive(Debug)]
enum Piece {
    Word(String, Span),
    Token(Token),
}

struct Scanner<'a> {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    pieces: Vec<Piece>,
    _src: &'a str,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            pieces: Vec::new(),
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn span(&self) -> Span {
        Span::new(self.line, self.col)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn last_is_separator_or_empty(&self) -> bool {
        match self.pieces.last() {
            None => true,
            Some(Piece::Token(t)) => matches!(t.kind, TokenKind::Separator(_)),
            Some(Piece::Word(..)) => false,
        }
    }

    /// Whether the previous piece would end an expression. Words are
    /// unresolved at this point, so a word ends an expression unless it is
    /// the last word of some keyword phrase that cannot.
    fn prev_ends_expression(&self) -> bool {
        match self.pieces.last() {
            None => false,
            Some(Piece::Token(t)) => t.ends_expression(),
            Some(Piece::Word(w, _)) => {
                let single = PHRASES
                    .iter()
                    .find(|p| p.words.len() == 1 && p.words[0] == w.as_str());
                if let Some(p) = single {
                    return p.kind.ends_expression();
                }
                let mut closing = PHRASES
                    .iter()
                    .filter(|p| p.words.len() > 1 && p.words.last() == Some(&w.as_str()))
                    .peekable();
                if closing.peek().is_none() {
                    return true;
                }
                closing.any(|p| p.kind.ends_expression())
            }
        }
    }

    fn push_separator(&mut self, kind: SepKind, span: Span) {
        if self.last_is_separator_or_empty() {
            return;
        }
        let text = match kind {
            SepKind::Newline => "\n",
            SepKind::Comma => ",",
        };
        self.pieces.push(Piece::Token(Token {
            kind: TokenKind::Separator(kind),
            text: text.into(),
            span,
        }));
    }

    /// True when only horizontal whitespace remains before the next newline
    /// (or end of input).
    fn rest_of_line_blank(&self, from: usize) -> bool {
        self.chars[from..]
            .iter()
            .take_while(|&&c| c != '\n')
            .all(|c| c.is_whitespace())
    }

    fn skip_to_eol(&mut self) {
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    fn run(mut self) -> Result<Vec<Piece>, LexError> {
        while let Some(c) = self.peek() {
            let start = self.span();
            match c {
                '\n' => {
                    self.bump();
                    self.push_separator(SepKind::Newline, start);
                }
                ',' => {
                    self.bump();
                    self.push_separator(SepKind::Comma, start);
                }
                c if c.is_whitespace() => {
                    self.bump();
                }
                '.' if self.peek_at(1) == Some('.') && self.peek_at(2) == Some('.') => {
                    if !self.rest_of_line_blank(self.pos + 3) {
                        return Err(LexError::new(start, "`...` must end the line"));
                    }
                    self.join_continuation();
                }
                '\u{2026}' => {
                    if !self.rest_of_line_blank(self.pos + 1) {
                        return Err(LexError::new(start, "`\u{2026}` must end the line"));
                    }
                    self.join_continuation();
                }
                '"' => self.string(start)?,
                '\'' if matches!(self.peek_at(1), Some('Z') | Some('z')) => {
                    self.bump();
                    let z = self.bump().unwrap();
                    self.pieces.push(Piece::Token(Token {
                        kind: TokenKind::Index,
                        text: format!("'{z}"),
                        span: start,
                    }));
                }
                '?' => {
                    self.bump();
                    self.pieces.push(Piece::Word("?".into(), start));
                }
                '-' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                    if self.prev_ends_expression() {
                        return Err(LexError::new(
                            start,
                            "unexpected `-`: the language has no infix operators",
                        ));
                    }
                    self.bump();
                    self.number(start, true)?;
                }
                c if c.is_ascii_digit() => self.number(start, false)?,
                c if is_ident_start(c) => {
                    let mut word = String::new();
                    while let Some(c) = self.peek() {
                        if !is_ident_char(c) {
                            break;
                        }
                        word.push(c);
                        self.bump();
                    }
                    match word.as_str() {
                        "BTW" => self.skip_to_eol(),
                        "OBTW" => self.block_comment(start)?,
                        _ => self.pieces.push(Piece::Word(word, start)),
                    }
                }
                other => {
                    return Err(LexError::new(
                        start,
                        format!("unexpected character `{other}`"),
                    ));
                }
            }
        }
        Ok(self.pieces)
    }

    fn join_continuation(&mut self) {
        // consume the dots, the trailing blanks and the newline itself
        self.skip_to_eol();
        self.bump();
    }

    fn block_comment(&mut self, start: Span) -> Result<(), LexError> {
        loop {
            match self.peek() {
                None => return Err(LexError::new(start, "unterminated OBTW comment")),
                Some('T')
                    if self.chars[self.pos..].starts_with(&['T', 'L', 'D', 'R'])
                        && !self.peek_at(4).is_some_and(is_ident_char) =>
                {
                    for _ in 0..4 {
                        self.bump();
                    }
                    return Ok(());
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn string(&mut self, start: Span) -> Result<(), LexError> {
        let begin = self.pos;
        self.bump();
        let mut out = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => {
                    return Err(LexError::new(start, "unterminated string literal"));
                }
                Some('"') => {
                    self.bump();
                    break;
                }
                Some(':') => {
                    let esc_span = self.span();
                    self.bump();
                    match self.peek() {
                        Some(')') => out.push('\n'),
                        Some('>') => out.push('\t'),
                        Some(':') => out.push(':'),
                        Some('"') => {
                            // `:"` escapes a quote only if another quote
                            // closes the string on this line; otherwise the
                            // colon is literal and the quote terminates.
                            let closes_later = self.chars[self.pos + 1..]
                                .iter()
                                .take_while(|&&c| c != '\n')
                                .any(|&c| c == '"');
                            if closes_later {
                                out.push('"');
                            } else {
                                out.push(':');
                                self.bump();
                                break;
                            }
                        }
                        Some(other) => {
                            return Err(LexError::new(
                                esc_span,
                                format!("unknown escape `:{other}` in string"),
                            ));
                        }
                        None => return Err(LexError::new(start, "unterminated string literal")),
                    }
                    self.bump();
                }
                Some(c) => {
                    out.push(c);
                    self.bump();
                }
            }
        }
        let text: String = self.chars[begin..self.pos].iter().collect();
        self.pieces.push(Piece::Token(Token {
            kind: TokenKind::Yarn(out),
            text,
            span: start,
        }));
        Ok(())
    }

    fn number(&mut self, start: Span, negative: bool) -> Result<(), LexError> {
        let mut text = String::new();
        if negative {
            text.push('-');
        }
        let mut dot = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.bump();
            } else if c == '.' && !dot && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                dot = true;
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek().is_some_and(is_ident_char) {
            return Err(LexError::new(
                start,
                format!("malformed number `{text}...`"),
            ));
        }
        let kind =
            if dot {
                TokenKind::Numbar(text.parse().map_err(|_| {
                    LexError::new(start, format!("invalid NUMBAR literal `{text}`"))
                })?)
            } else {
                TokenKind::Numbr(text.parse().map_err(|_| {
                    LexError::new(start, format!("NUMBR literal `{text}` out of range"))
                })?)
            };
        self.pieces.push(Piece::Token(Token {
            kind,
            text,
            span: start,
        }));
        Ok(())
    }
}

/// Phrases ordered so that, for any starting word, longer phrases come first.
fn phrases_longest_first() -> Vec<&'static KeywordPhrase> {
    let mut v: Vec<_> = PHRASES.iter().collect();
    v.sort_by_key(|p| std::cmp::Reverse(p.words.len()));
    v
}

/// Find the longest phrase matching the words starting at `pieces[i]`.
fn match_phrase(
    pieces: &[Piece],
    i: usize,
    table: &[&'static KeywordPhrase],
) -> Option<(Keyword, usize)> {
    'phrase: for phrase in table {
        for (k, word) in phrase.words.iter().enumerate() {
            match pieces.get(i + k) {
                Some(Piece::Word(w, _)) if w == word => {}
                _ => continue 'phrase,
            }
        }
        return Some((phrase.kind, phrase.words.len()));
    }
    None
}

/// Convert source text into tokens.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let pieces = Scanner::new(source).run()?;
    let table = phrases_longest_first();
    let mut out = Vec::with_capacity(pieces.len());
    let mut i = 0;
    while i < pieces.len() {
        match &pieces[i] {
            Piece::Token(t) => {
                out.push(t.clone());
                i += 1;
            }
            Piece::Word(w, span) => {
                if let Some((kind, len)) = match_phrase(&pieces, i, &table) {
                    let text = pieces[i..i + len]
                        .iter()
                        .map(|p| match p {
                            Piece::Word(w, _) => w.as_str(),
                            Piece::Token(_) => unreachable!(),
                        })
                        .fold(String::new(), |mut acc, w| {
                            if !acc.is_empty() && w != "?" {
                                acc.push(' ');
                            }
                            acc.push_str(w);
                            acc
                        });
                    out.push(Token {
                        kind: TokenKind::Keyword(kind),
                        text,
                        span: *span,
                    });
                    i += len;
                } else if w == "?" {
                    return Err(LexError::new(*span, "unexpected `?`"));
                } else {
                    out.push(Token {
                        kind: TokenKind::Ident(w.clone()),
                        text: w.clone(),
                        span: *span,
                    });
                    i += 1;
                }
            }
        }
    }
    Ok(out)
}
