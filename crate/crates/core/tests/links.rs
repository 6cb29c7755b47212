#![cfg(feature = "live-links")]

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::thread;
use std::time::{Duration, Instant};

use crowd_cookbook::builder::{check_links_parallel, extract_links, CachedChecker, HttpChecker, LinkChecker};

fn respond(mut stream: TcpStream) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut request = String::new();
    if reader.read_line(&mut request).is_err() {
        return;
    }
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
            break;
        }
    }
    let mut parts = request.split_whitespace();
    let method = parts.next().unwrap_or("");
    let path = parts.next().unwrap_or("/");
    let (status, extra) = match path {
        "/ok" => ("200 OK", String::new()),
        "/missing" => ("404 Not Found", String::new()),
        "/broken" => ("500 Internal Server Error", String::new()),
        "/no-head" if method == "HEAD" => ("405 Method Not Allowed", String::new()),
        "/no-head" => ("200 OK", String::new()),
        "/slow" => {
            thread::sleep(Duration::from_secs(3));
            ("200 OK", String::new())
        }
        p if p.starts_with("/hop/") => {
            let n: u32 = p[5..].parse().unwrap();
            if n == 0 {
                ("200 OK", String::new())
            } else {
                ("302 Found", format!("Location: /hop/{}\r\n", n - 1))
            }
        }
        _ => ("404 Not Found", String::new()),
    };
    let _ = write!(stream, "HTTP/1.1 {status}\r\n{extra}Content-Length: 0\r\nConnection: close\r\n\r\n");
}

fn server() -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        for stream in listener.incoming().flatten() {
            thread::spawn(move || respond(stream));
        }
    });
    format!("http://{addr}")
}

fn checker() -> HttpChecker {
    HttpChecker::with_timeout(Duration::from_millis(800)).unwrap()
}

#[test]
fn statuses() {
    let base = server();
    let c = checker();
    let ok = c.check(&format!("{base}/ok"));
    assert!(ok.alive);
    assert_eq!(ok.status, Some(200));
    let missing = c.check(&format!("{base}/missing"));
    assert!(!missing.alive);
    assert_eq!(missing.status, Some(404));
    assert_eq!(c.check(&format!("{base}/broken")).status, Some(500));
}

#[test]
fn falls_back_to_get() {
    let base = server();
    let s = checker().check(&format!("{base}/no-head"));
    assert!(s.alive);
    assert_eq!(s.status, Some(200));
}

#[test]
fn redirect_limit() {
    let base = server();
    let c = checker();
    for hops in 0..=HttpChecker::MAX_REDIRECTS {
        assert!(c.check(&format!("{base}/hop/{hops}")).alive, "{hops} redirects");
    }
    let too_many = c.check(&format!("{base}/hop/{}", HttpChecker::MAX_REDIRECTS + 1));
    assert!(!too_many.alive);
    assert_eq!(too_many.status, None);
}

#[test]
fn timeout_is_unreachable() {
    let base = server();
    let start = Instant::now();
    let s = checker().check(&format!("{base}/slow"));
    assert!(!s.alive);
    assert_eq!(s.status, None);
    assert!(start.elapsed() < Duration::from_secs(3));
}

#[test]
fn refused_connection_is_unreachable() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let s = checker().check(&format!("http://127.0.0.1:{port}/"));
    assert!(!s.alive);
    assert_eq!(s.status, None);
}

#[test]
fn links_from_a_post() {
    let base = server();
    let body = format!(r#"<p>See <a href="{base}/ok">docs</a> and {base}/missing.</p><pre><code>get("{base}/broken")</code></pre>"#);
    let urls = extract_links(&body);
    assert_eq!(urls, vec![format!("{base}/ok"), format!("{base}/missing")]);
    let cached = CachedChecker::new(checker());
    let mut doubled = urls.clone();
    doubled.extend(urls.clone());
    let statuses = check_links_parallel(&doubled, &cached, 4);
    assert_eq!(statuses.iter().map(|s| s.alive).collect::<Vec<_>>(), vec![true, false, true, false]);
    assert_eq!(cached.cached(), 2);
}
