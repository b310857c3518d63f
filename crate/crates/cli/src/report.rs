//! `key: value` report lines.

use cvschur::covmat::Block;

/// Twelve significant digits, fixed notation for magnitudes in
/// `[1e-4, 1e12)` and scientific otherwise.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Default)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.lines.push((key.to_owned(), value.into()));
        self
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, num(value))
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.text(key, if value { "true" } else { "false" })
    }

    /// A single-mode block `[[d, m], [m*, d]]` as `d`, `m_re`, `m_im`.
    pub fn block(&mut self, key: &str, b: &Block) -> &mut Self {
        self.num(&format!("{key}_d"), b[(0, 0)].re)
            .num(&format!("{key}_m_re"), b[(0, 1)].re)
            .num(&format!("{key}_m_im"), b[(0, 1)].im)
    }

    pub fn render(&self) -> String {
        self.lines
            .iter()
            .map(|(k, v)| format!("{k}: {v}\n"))
            .collect()
    }
}
