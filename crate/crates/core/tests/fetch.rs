use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use cartan_core::newforms::{Fetcher, RemoteConfig};
use cartan_core::Error;

const LEVEL_11: &str = r#"[{"level":11,"label":"11.2.a","dim":1,"is_cm":false,"cm_disc":null,"al_signs":{"11":-1}}]"#;

/// Serves `failures` 503s and then the level 11 payload; returns the base url
/// and the request counter.
fn serve(failures: usize) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let mut stream = stream.unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut line = String::new();
            while reader.read_line(&mut line).unwrap() > 2 {
                line.clear();
            }
            let n = counter.fetch_add(1, Ordering::SeqCst);
            let (status, body) = if n < failures { ("503 Service Unavailable", "") } else { ("200 OK", LEVEL_11) };
            let _ = write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
        }
    });
    (url, hits)
}

fn config(endpoint: String, cache: &std::path::Path) -> RemoteConfig {
    RemoteConfig {
        endpoint,
        timeout: Duration::from_secs(5),
        offline: false,
        cache_dir: cache.to_path_buf(),
        attempts: 3,
        backoff: Duration::from_millis(10),
    }
}

#[test]
fn retries_then_caches() {
    let dir = tempfile::tempdir().unwrap();
    let (url, hits) = serve(2);
    let f = Fetcher::new(config(url, dir.path()));
    let orbits = f.fetch(&[11]).unwrap();
    assert_eq!(orbits.len(), 1);
    assert_eq!(orbits[0].al_sign(11), Some(-1));
    assert_eq!(f.network_calls(), 3);
    assert_eq!(hits.load(Ordering::SeqCst), 3);
    assert!(dir.path().join("newforms/11.json").exists());

    let again = Fetcher::new(config("http://127.0.0.1:9".into(), dir.path()));
    assert_eq!(again.fetch(&[11]).unwrap(), orbits);
    assert_eq!(again.network_calls(), 0);
}

#[test]
fn gives_up_after_the_last_attempt() {
    let dir = tempfile::tempdir().unwrap();
    let (url, hits) = serve(10);
    let f = Fetcher::new(config(url, dir.path()));
    assert!(matches!(f.fetch(&[11]), Err(Error::Network(_))));
    assert_eq!(hits.load(Ordering::SeqCst), 3);
}

#[test]
fn offline_needs_a_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config("http://127.0.0.1:9".into(), dir.path());
    c.offline = true;
    let f = Fetcher::new(c.clone());
    assert!(matches!(f.fetch(&[11]), Err(Error::Network(_))));
    assert_eq!(f.network_calls(), 0);

    std::fs::create_dir_all(dir.path().join("newforms")).unwrap();
    std::fs::write(dir.path().join("newforms/11.json"), LEVEL_11).unwrap();
    let db = Fetcher::new(c).fetch_db(&[11]).unwrap();
    assert!(db.is_complete(11));
}

#[test]
fn payload_for_the_wrong_level_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (url, _) = serve(0);
    let f = Fetcher::new(config(format!("{url}/{{level}}"), dir.path()));
    assert!(f.fetch(&[37]).is_err());
    assert!(!dir.path().join("newforms/37.json").exists());
}
