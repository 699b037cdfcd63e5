//! Small char-offset helpers shared by the segmenter and extractors.

/// Char-offset to byte-offset index for slicing by span.
pub(crate) struct CharIndex {
    bytes: Vec<usize>,
}

impl CharIndex {
    pub(crate) fn new(text: &str) -> Self {
        let mut bytes: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        bytes.push(text.len());
        CharIndex { bytes }
    }

    pub(crate) fn len(&self) -> usize {
        self.bytes.len() - 1
    }

    pub(crate) fn slice<'a>(&self, text: &'a str, start: usize, end: usize) -> &'a str {
        &text[self.bytes[start]..self.bytes[end]]
    }
}

/// Char offset of the first character of the line following `pos`.
pub(crate) fn next_line_start(text: &str, index: &CharIndex, pos: usize) -> usize {
    let n = index.len();
    let mut i = pos;
    for c in index.slice(text, pos, n).chars() {
        i += 1;
        if c == '\n' {
            return i;
        }
    }
    n
}
