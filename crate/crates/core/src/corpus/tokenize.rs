/// Splits text into lowercased word tokens.
///
/// A token is a maximal run of Unicode letters. Apostrophes and hyphens are
/// kept when they sit between two letters (`don't`, `well-known`); every
/// other character, digits included, separates tokens. Since `<`, `>` and
/// `:` are separators, no token can ever look like an enhanced token.
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        if is_word_char(c) || (is_combining_mark(c) && !current.is_empty()) {
            current.extend(c.to_lowercase());
            continue;
        }
        if is_joiner(c)
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|&next| is_word_char(next))
        {
            current.push(c);
            continue;
        }
        if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn is_word_char(c: char) -> bool {
    c.is_alphabetic()
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '\u{2010}' | '\u{2011}')
}

// Combining diacritics (e.g. a decomposed "й") stay attached to their letter.
fn is_combining_mark(c: char) -> bool {
    matches!(c, '\u{0300}'..='\u{036F}' | '\u{1AB0}'..='\u{1AFF}' | '\u{20D0}'..='\u{20FF}')
}
