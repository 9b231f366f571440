use std::fmt;

/// 1-based line/column position in source text. Columns count characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: u32,
    pub column: u32,
}

impl Position {
    pub fn new(line: u32, column: u32) -> Self {
        Position { line, column }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub start: Position,
    pub end: Position,
}

impl SourceSpan {
    pub fn new(start: Position, end: Position) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

/// Optional source location attached to a model entity.
///
/// Every `Span` compares equal to every other, so two documents with the
/// same content are equal regardless of where (or whether) they were parsed.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span(pub Option<SourceSpan>);

impl Span {
    pub const NONE: Span = Span(None);

    pub fn get(&self) -> Option<SourceSpan> {
        self.0
    }
}

impl From<SourceSpan> for Span {
    fn from(s: SourceSpan) -> Self {
        Span(Some(s))
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}
