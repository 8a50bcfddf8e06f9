use std::process::ExitCode;

use west_service::{router, Config, DEFAULT_BIND};

#[tokio::main]
async fn main() -> ExitCode {
    let config = match Config::from_env() {
        Ok(config) => config,
        Err(e) => {
            eprintln!("west-serve: {e}");
            return ExitCode::from(78);
        }
    };
    let bind = std::env::var("WEST_BIND").unwrap_or_else(|_| DEFAULT_BIND.to_string());
    let listener = match tokio::net::TcpListener::bind(&bind).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("west-serve: cannot bind {bind}: {e}");
            return ExitCode::from(74);
        }
    };
    eprintln!(
        "west-serve: listening on {bind} (time budget {} ms, expansion budget {})",
        config.time_budget.as_millis(),
        config.expansion_budget
    );
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    match axum::serve(listener, router(config)).with_graceful_shutdown(shutdown).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("west-serve: {e}");
            ExitCode::from(70)
        }
    }
}
