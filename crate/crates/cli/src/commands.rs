use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use layers_core::{
    build_chain_certificate, build_norm_certificate, lower_bound, peel_with, upper_bound,
    Certificate, Engine, Grid, LayerAssignment,
};

use crate::args::{
    CertifyArgs, EngineArg, GrowthArgs, LayerFormat, PeelArgs, RenderArgs, VerifyArgs,
};
use crate::error::CliError;
use crate::growth::growth;
use crate::io::{centered_grid, resolve, to_csv, LayerDocument};
use crate::render::render_step;

/// Standard output and standard error of a command.
pub struct Streams<'a> {
    pub out: &'a mut (dyn Write + Send),
    pub err: &'a mut (dyn Write + Send),
}

fn emit(w: &mut dyn Write, text: &str) -> Result<(), CliError> {
    w.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// `layers: 4; sizes: 8 12 6 1`
pub fn summary(a: &LayerAssignment) -> String {
    let sizes: Vec<String> = a.layer_sizes().iter().map(ToString::to_string).collect();
    format!("layers: {}; sizes: {}\n", a.num_layers(), sizes.join(" "))
}

/// `dn+1 ≤ L ≤ dn²+1` with the numbers filled in.
pub fn sandwich(grid: &Grid, layers: usize) -> String {
    format!(
        "{} ≤ {} ≤ {}",
        lower_bound(grid.dim(), grid.radius()),
        layers,
        upper_bound(grid.dim(), grid.radius())
    )
}

fn engine_name(e: EngineArg) -> &'static str {
    match e {
        EngineArg::Auto => "auto",
        EngineArg::Generic => "generic",
        EngineArg::Orbit => "orbit",
        EngineArg::Planar => "2d",
    }
}

pub fn peel(args: &PeelArgs, io: &mut Streams) -> Result<(), CliError> {
    let input = resolve(&args.grid, args.input.as_deref(), args.cap)?;
    let a = peel_with(&input.set, args.engine.into())?;
    if let Some(other) = args.cross_check {
        let b = peel_with(&input.set, other.into())?;
        if let Some(i) = (0..a.indices().len()).find(|&i| a.indices()[i] != b.indices()[i]) {
            return Err(CliError::Inconsistent(format!(
                "engines {} and {} disagree: {} is in layer {} versus {}",
                engine_name(args.engine),
                engine_name(other),
                input.set.points()[i],
                a.indices()[i],
                b.indices()[i]
            )));
        }
    }
    let format = args.format.or_else(|| {
        args.output
            .as_ref()
            .map(|p| match p.extension().and_then(|e| e.to_str()) {
                Some("csv") => LayerFormat::Csv,
                _ => LayerFormat::Json,
            })
    });
    let data = format.map(|f| match f {
        LayerFormat::Json => LayerDocument::new(&a, input.grid.as_ref()).to_json(),
        LayerFormat::Csv => to_csv(&a),
    });
    match (data, &args.output) {
        (Some(data), Some(path)) => {
            write_file(path, &data)?;
            emit(io.out, &summary(&a))
        }
        (Some(data), None) => {
            emit(io.err, &summary(&a))?;
            emit(io.out, &data)
        }
        (None, _) => emit(io.out, &summary(&a)),
    }
}

/// Paths of the two certificate files for `grid` inside `dir`.
pub fn certificate_paths(dir: &Path, grid: &Grid) -> (PathBuf, PathBuf) {
    let stem = format!("grid-d{}-n{}", grid.dim(), grid.radius());
    (
        dir.join(format!("{stem}.norm.cert")),
        dir.join(format!("{stem}.chain.cert")),
    )
}

fn reread(path: &Path) -> Result<Certificate, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.parse().map_err(CliError::Core)
}

pub fn certify(args: &CertifyArgs, io: &mut Streams) -> Result<(), CliError> {
    let grid = centered_grid(&args.grid)?;
    let a = peel_with(
        &grid.materialize_with_cap(args.cap.cap)?,
        args.engine.into(),
    )?;
    let norm = build_norm_certificate(&grid, &a)?;
    let chain = build_chain_certificate(&grid, &a)?;

    fs::create_dir_all(&args.output).map_err(|e| CliError::io(&args.output, e))?;
    let (norm_path, chain_path) = certificate_paths(&args.output, &grid);
    write_file(&norm_path, &Certificate::NormDescent(norm).to_string())?;
    write_file(&chain_path, &Certificate::Chain(chain).to_string())?;

    for path in [&norm_path, &chain_path] {
        let cert = reread(path)?;
        cert.verify()
            .and_then(|()| cert.check_against(&a))
            .map_err(|d| CliError::Inconsistent(format!("{}: {d}", path.display())))?;
        emit(io.out, &format!("verified {}\n", path.display()))?;
    }
    emit(io.out, &format!("{}\n", sandwich(&grid, a.num_layers())))
}

pub fn verify(args: &VerifyArgs, io: &mut Streams) -> Result<(), CliError> {
    let cert = reread(&args.file)?;
    let kind = match cert {
        Certificate::NormDescent(_) => "norm-descent",
        Certificate::Chain(_) => "chain",
    };
    let g = *cert.grid();
    cert.verify()
        .map_err(|d| CliError::Inconsistent(format!("invalid {kind} certificate: {d}")))?;
    if args.recompute {
        let a = peel_with(&g.materialize_with_cap(args.cap.cap)?, Engine::Auto)?;
        cert.check_against(&a).map_err(|d| {
            CliError::Inconsistent(format!("{kind} certificate disagrees with peeling: {d}"))
        })?;
    }
    emit(
        io.out,
        &format!(
            "valid {kind} certificate for [-{n}, {n}]^{d}\n",
            n = g.radius(),
            d = g.dim()
        ),
    )
}

pub fn render(args: &RenderArgs, io: &mut Streams) -> Result<(), CliError> {
    let input = resolve(&args.grid, args.input.as_deref(), args.cap)?;
    if input.set.dim() != 2 {
        return Err(CliError::usage(format!(
            "rendering needs dimension 2, got {}",
            input.set.dim()
        )));
    }
    let a = peel_with(&input.set, args.engine.into())?;
    let svgs = args
        .steps
        .iter()
        .map(|&s| render_step(&a, s).map(|svg| (s, svg)))
        .collect::<Result<Vec<_>, _>>()?;
    fs::create_dir_all(&args.output).map_err(|e| CliError::io(&args.output, e))?;
    for (step, svg) in svgs {
        let path = args.output.join(format!("step-{step}.svg"));
        write_file(&path, &svg)?;
        emit(io.out, &format!("wrote {}\n", path.display()))?;
    }
    Ok(())
}

pub fn growth_cmd(args: &GrowthArgs, io: &mut Streams) -> Result<(), CliError> {
    let report = growth(&args.sides, args.engine.into(), args.cap)?;
    emit(io.out, &report.to_string())
}
