//! Splitting raw text into sampling units (lines or sentences).

use alloc::string::String;
use alloc::string::ToString;
use alloc::vec::Vec;

/// Granularity of a sampling unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitMode {
    /// One unit per non-empty line.
    Line,
    /// One unit per sentence: a unit ends at `.`, `?` or `!` when the
    /// terminator is followed by whitespace (or ends the text); the
    /// terminator stays with its sentence. Text without terminal
    /// punctuation forms a single trailing unit.
    Sentence,
}

/// Splits `text` into trimmed, non-empty units.
///
/// Concatenating the units reproduces the input up to the whitespace
/// removed at unit boundaries. An abbreviation-style period with no
/// following whitespace (`зүйл.1`) does not end a sentence.
pub fn segment_units(text: &str, mode: UnitMode) -> Vec<String> {
    match mode {
        UnitMode::Line => text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(ToString::to_string)
            .collect(),
        UnitMode::Sentence => {
            let mut units = Vec::new();
            let mut start = 0;
            let mut chars = text.char_indices().peekable();
            while let Some((i, ch)) = chars.next() {
                if matches!(ch, '.' | '?' | '!') {
                    let next_is_boundary = match chars.peek() {
                        Some(&(_, next)) => next.is_whitespace(),
                        None => true,
                    };
                    if next_is_boundary {
                        let end = i + ch.len_utf8();
                        push_trimmed(&mut units, &text[start..end]);
                        start = end;
                    }
                }
            }
            push_trimmed(&mut units, &text[start..]);
            units
        }
    }
}

fn push_trimmed(units: &mut Vec<String>, raw: &str) {
    let trimmed = raw.trim();
    if !trimmed.is_empty() {
        units.push(trimmed.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sentence_mode_splits_after_terminator_and_whitespace() {
        assert_eq!(
            segment_units("а б. в г.", UnitMode::Sentence),
            vec!["а б.", "в г."]
        );
    }

    #[test]
    fn sentence_terminator_without_whitespace_does_not_split() {
        assert_eq!(
            segment_units("зүйл.1 хэсэг. дараах", UnitMode::Sentence),
            vec!["зүйл.1 хэсэг.", "дараах"]
        );
    }

    #[test]
    fn sentence_mode_handles_question_and_exclamation() {
        assert_eq!(
            segment_units("Хэн бэ? Тийм! За.", UnitMode::Sentence),
            vec!["Хэн бэ?", "Тийм!", "За."]
        );
        // A '?' glued to '!' ends the unit only at the '!'.
        assert_eq!(
            segment_units("Үнэн үү?! Тийм.", UnitMode::Sentence),
            vec!["Үнэн үү?!", "Тийм."]
        );
    }

    #[test]
    fn sentence_mode_without_terminator_yields_one_unit() {
        assert_eq!(
            segment_units("нэг хоёр гурав", UnitMode::Sentence),
            vec!["нэг хоёр гурав"]
        );
    }

    #[test]
    fn line_mode_drops_blank_lines_and_carriage_returns() {
        assert_eq!(
            segment_units("нэг\r\n\r\n  хоёр  \nгурав", UnitMode::Line),
            vec!["нэг", "хоёр", "гурав"]
        );
    }

    #[test]
    fn empty_input_yields_no_units() {
        assert!(segment_units("", UnitMode::Line).is_empty());
        assert!(segment_units("  \n ", UnitMode::Sentence).is_empty());
    }

    #[test]
    fn units_concatenate_back_to_the_text_modulo_boundary_whitespace() {
        let text = "Нэг өгүүлбэр. Хоёр дахь нь!  Гурав\nдахь өгүүлбэр уу? Тийм.";
        let squash = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
        for mode in [UnitMode::Line, UnitMode::Sentence] {
            let joined = segment_units(text, mode).join(" ");
            assert_eq!(squash(&joined), squash(text));
        }
    }
}
