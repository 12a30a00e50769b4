use alloc::format;
use alloc::string::String;

/// Picks `base`, or `base` with a numeric suffix, such that `taken` rejects it.
///
/// Trailing digits of `base` are stripped first so repeated freshening of
/// `x1` yields `x2` rather than `x11`.
pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    if !taken(stem) {
        return String::from(stem);
    }
    let mut n = 1usize;
    loop {
        let candidate = format!("{stem}{n}");
        if !taken(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_suffix_before_counting() {
        assert_eq!(fresh_name("x1", |n| n == "x" || n == "x1"), "x2");
        assert_eq!(fresh_name("y", |_| false), "y");
        assert_eq!(fresh_name("7", |_| false), "v");
    }
}
