//! UDP responder and caller.
//!
//! Request: `corr_id (4 bytes) || encoded word`.
//! Reply:   `corr_id (4 bytes) || status || reason`, where status is
//! `0x01` for ACCEPT and `0x00` for REJECT.

use std::io;
use std::net::{SocketAddr, ToSocketAddrs, UdpSocket};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use rand::RngCore;

use super::codec::decode_word;
use super::{send_bytes, verify_wire};
use crate::error::{invalid, Result};
use crate::message::Message;
use crate::scheme::Scheme;
use crate::verdict::{Malformed, Rejection, Verdict};

pub const REPLY_LEN: usize = 6;

const STATUS_ACCEPT: u8 = 0x01;
const STATUS_REJECT: u8 = 0x00;
const POLL_INTERVAL: Duration = Duration::from_millis(50);
const MAX_DATAGRAM: usize = 65_507;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    TagMismatch,
    Malformed,
    ParameterMismatch,
    ShortDatagram,
    Unknown(u8),
}

impl RejectReason {
    pub fn code(self) -> u8 {
        match self {
            RejectReason::TagMismatch => 1,
            RejectReason::Malformed => 2,
            RejectReason::ParameterMismatch => 3,
            RejectReason::ShortDatagram => 4,
            RejectReason::Unknown(c) => c,
        }
    }

    pub fn from_code(code: u8) -> Self {
        match code {
            1 => RejectReason::TagMismatch,
            2 => RejectReason::Malformed,
            3 => RejectReason::ParameterMismatch,
            4 => RejectReason::ShortDatagram,
            c => RejectReason::Unknown(c),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RejectReason::TagMismatch => "tag-mismatch",
            RejectReason::Malformed => "malformed",
            RejectReason::ParameterMismatch => "parameter-mismatch",
            RejectReason::ShortDatagram => "short-datagram",
            RejectReason::Unknown(_) => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallOutcome {
    Accept,
    Reject(RejectReason),
    Timeout,
}

impl std::fmt::Display for CallOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CallOutcome::Accept => f.write_str("ACCEPT"),
            CallOutcome::Reject(r) => write!(f, "REJECT ({})", r.name()),
            CallOutcome::Timeout => f.write_str("TIMEOUT"),
        }
    }
}

/// Verifies incoming words against one fixed identity.
#[derive(Debug, Clone)]
pub struct Responder {
    scheme: Scheme,
    expected: Message,
}

impl Responder {
    pub fn new(scheme: Scheme, expected: Message) -> Result<Self> {
        if expected.field() != scheme.field() || expected.k() != scheme.k() {
            return Err(invalid("identity does not match the scheme parameters"));
        }
        super::header_for(&scheme)?;
        Ok(Self { scheme, expected })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    /// Builds the reply for one request datagram.
    pub fn handle_datagram(&self, buf: &[u8]) -> [u8; REPLY_LEN] {
        let mut reply = [0u8; REPLY_LEN];
        if buf.len() < 4 {
            reply[4] = STATUS_REJECT;
            reply[5] = RejectReason::ShortDatagram.code();
            return reply;
        }
        reply[..4].copy_from_slice(&buf[..4]);
        let verdict = match decode_word(&buf[4..]) {
            Ok(word) => verify_wire(&self.scheme, &self.expected, word),
            Err(e) => {
                log::debug!("undecodable word: {e}");
                reply[4] = STATUS_REJECT;
                reply[5] = RejectReason::Malformed.code();
                return reply;
            }
        };
        let (status, reason) = match verdict {
            Verdict::Accept => (STATUS_ACCEPT, 0),
            Verdict::Reject(Rejection::TagMismatch) => {
                (STATUS_REJECT, RejectReason::TagMismatch.code())
            }
            Verdict::Reject(Rejection::Malformed(Malformed::ParameterMismatch(_))) => {
                (STATUS_REJECT, RejectReason::ParameterMismatch.code())
            }
            Verdict::Reject(Rejection::Malformed(_)) => {
                (STATUS_REJECT, RejectReason::Malformed.code())
            }
        };
        reply[4] = status;
        reply[5] = reason;
        reply
    }
}

/// A running responder. Dropping the handle stops the workers.
pub struct ServerHandle {
    addr: SocketAddr,
    shutdown: Arc<AtomicBool>,
    workers: Vec<JoinHandle<()>>,
}

impl ServerHandle {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn shutdown(mut self) {
        self.stop();
    }

    /// Blocks until every worker exits.
    pub fn join(mut self) {
        for w in self.workers.drain(..) {
            let _ = w.join();
        }
    }

    fn stop(&mut self) {
        self.shutdown.store(true, Ordering::SeqCst);
        for w in self.workers.drain(..) {
            let _ = w.join();
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        self.stop();
    }
}

/// Binds `addr` and answers requests on `workers` threads sharing one socket.
pub fn serve(
    responder: Responder,
    addr: impl ToSocketAddrs,
    workers: usize,
) -> io::Result<ServerHandle> {
    let socket = UdpSocket::bind(addr)?;
    socket.set_read_timeout(Some(POLL_INTERVAL))?;
    let local = socket.local_addr()?;
    let shutdown = Arc::new(AtomicBool::new(false));
    let responder = Arc::new(responder);
    let mut handles = Vec::with_capacity(workers.max(1));
    for _ in 0..workers.max(1) {
        let socket = socket.try_clone()?;
        let shutdown = Arc::clone(&shutdown);
        let responder = Arc::clone(&responder);
        handles.push(std::thread::spawn(move || {
            worker(&socket, &responder, &shutdown)
        }));
    }
    log::info!("responder listening on {local}");
    Ok(ServerHandle {
        addr: local,
        shutdown,
        workers: handles,
    })
}

fn worker(socket: &UdpSocket, responder: &Responder, shutdown: &AtomicBool) {
    let mut buf = vec![0u8; MAX_DATAGRAM];
    while !shutdown.load(Ordering::SeqCst) {
        match socket.recv_from(&mut buf) {
            Ok((len, peer)) => {
                let reply = responder.handle_datagram(&buf[..len]);
                if let Err(e) = socket.send_to(&reply, peer) {
                    log::warn!("reply to {peer} failed: {e}");
                }
            }
            Err(e) if is_timeout(&e) => {}
            // ICMP errors from earlier replies surface here on some platforms.
            Err(e) if e.kind() == io::ErrorKind::ConnectionReset => {}
            Err(e) => {
                log::error!("recv failed: {e}");
                std::thread::sleep(POLL_INTERVAL);
            }
        }
    }
}

fn is_timeout(e: &io::Error) -> bool {
    matches!(
        e.kind(),
        io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CallOptions {
    /// Per-attempt wait for a reply.
    pub timeout: Duration,
    /// Extra attempts after a timeout. Each one sends a fresh word.
    pub retries: u32,
}

impl Default for CallOptions {
    fn default() -> Self {
        Self {
            timeout: Duration::from_millis(1000),
            retries: 2,
        }
    }
}

/// Sends an identification word for `u` to `endpoint` and waits for the
/// verdict. Replies with a foreign correlation id are ignored.
pub fn call<R: RngCore + ?Sized>(
    endpoint: impl ToSocketAddrs,
    scheme: &Scheme,
    u: &Message,
    rng: &mut R,
    opts: CallOptions,
) -> Result<CallOutcome> {
    let peer = endpoint
        .to_socket_addrs()?
        .next()
        .ok_or_else(|| invalid("endpoint did not resolve"))?;
    let bind: SocketAddr = if peer.is_ipv4() {
        "0.0.0.0:0".parse().expect("literal")
    } else {
        "[::]:0".parse().expect("literal")
    };
    let socket = UdpSocket::bind(bind)?;
    socket.connect(peer)?;
    let mut reply = [0u8; 64];
    for attempt in 0..=opts.retries {
        let corr = rng.next_u32().to_be_bytes();
        let mut req = corr.to_vec();
        req.extend_from_slice(&send_bytes(scheme, u, rng)?);
        match socket.send(&req) {
            Ok(_) => {}
            Err(e) if e.kind() == io::ErrorKind::ConnectionRefused => {}
            Err(e) => return Err(e.into()),
        }
        let deadline = Instant::now() + opts.timeout;
        loop {
            let now = Instant::now();
            if now >= deadline {
                log::debug!("attempt {} timed out", attempt + 1);
                break;
            }
            socket.set_read_timeout(Some(deadline - now))?;
            match socket.recv(&mut reply) {
                Ok(len) if len == REPLY_LEN && reply[..4] == corr => {
                    return Ok(match reply[4] {
                        STATUS_ACCEPT => CallOutcome::Accept,
                        _ => CallOutcome::Reject(RejectReason::from_code(reply[5])),
                    });
                }
                Ok(_) => continue,
                Err(e) if is_timeout(&e) => break,
                // Nobody listening yet; keep waiting out this attempt.
                Err(e) if e.kind() == io::ErrorKind::ConnectionRefused => {
                    std::thread::sleep(
                        POLL_INTERVAL.min(deadline.saturating_duration_since(Instant::now())),
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(CallOutcome::Timeout)
}
