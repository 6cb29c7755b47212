//! Show each step that turns a post into LDA tokens.

use crowd_cookbook::textprep::{porter_stem, strip_code, strip_html, tokenize, StopwordList};

const BODY: &str = r#"<p>How do I add a <b>sortable</b> column to my tables? I tried:</p>
<pre><code>TableColumn col = new TableColumn(table, SWT.NONE);
col.setText("Name");</code></pre>
<p>but clicking the headers &amp; sorting the rows does nothing.</p>"#;

fn main() {
    let cleaned = strip_code(BODY);
    println!("code blocks removed: {}", cleaned.code_blocks.len());
    let text = strip_html(&cleaned.text);
    println!("text: {}", text.split_whitespace().collect::<Vec<_>>().join(" "));
    let tokens = tokenize(&text);
    println!("tokens: {tokens:?}");
    let kept = StopwordList::default().remove_stopwords(tokens);
    println!("without stopwords: {kept:?}");
    let stems: Vec<String> = kept.iter().map(|t| porter_stem(t)).collect();
    println!("stems: {stems:?}");
}
