//! Find the links in a post body and check them, offline from a manifest or live.
//!
//! cargo run --example check_links            # offline
//! cargo run --example check_links -- --live  # over HTTP

use std::env;

use crowd_cookbook::builder::{check_links_parallel, extract_links, CachedChecker, LinkChecker, ManifestChecker};

const BODY: &str = r#"<p>See <a href="https://www.eclipse.org/swt/snippets/">the snippets</a> and
https://help.eclipse.org/topic/org.eclipse.platform.doc.isv/reference/api/org/eclipse/swt/widgets/Table.html.</p>
<pre><code>// not checked: http://localhost:8080/</code></pre>
<p>Old page: <a href="http://dev.eclipse.org/viewcvs/gone.html">here</a></p>"#;

fn main() {
    let urls = extract_links(BODY);
    let checker: Box<dyn LinkChecker> = if env::args().any(|a| a == "--live") {
        Box::new(crowd_cookbook::builder::HttpChecker::new().expect("http client"))
    } else {
        let manifest = r#"{
            "https://www.eclipse.org/swt/snippets/": 200,
            "http://dev.eclipse.org/viewcvs/gone.html": 404
        }"#;
        Box::new(ManifestChecker::from_json(manifest).expect("manifest"))
    };
    let cached = CachedChecker::new(checker);
    for s in check_links_parallel(&urls, &cached, 4) {
        let status = s.status.map_or("-".to_string(), |c| c.to_string());
        println!("{:<5} {:>3}  {}", if s.alive { "alive" } else { "dead" }, status, s.url);
    }
}
