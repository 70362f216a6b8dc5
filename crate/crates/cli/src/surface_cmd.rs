use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use minsurf::legendre::{helicoid_check, sample_surface_with, GridSpec, SurfaceSample};
use minsurf::mesh_io::{triangulate, write_csv, write_obj, write_ply, MeshData};
use minsurf::ContactExpr;
use rayon::prelude::*;

use crate::catalog_cmd::{load_catalog, resolve};
use crate::config::RunConfig;
use crate::{CmdResult, Failure, Format};

pub const GALLERY: [&str; 9] = ["phi5", "phi6", "phi7", "phi8", "phi9", "phi10", "phi11", "phi12", "phi13"];
const GALLERY_MANIFEST: &str = "gallery.tsv";
const GALLERY_HEADER: &str = "# minsurf gallery manifest v1";

/// File stem for a surface: the catalog name, or `custom` for expressions.
fn stem(label: &str, from_catalog: bool) -> String {
    if from_catalog {
        label.to_string()
    } else {
        "custom".to_string()
    }
}

struct Rendered {
    sample: SurfaceSample,
    mesh: MeshData,
    files: Vec<PathBuf>,
}

fn render(x: &ContactExpr, name: &str, stem: &str, spec: &GridSpec, cfg: &RunConfig) -> anyhow::Result<Rendered> {
    let sample = sample_surface_with(x, name, spec, cfg.eps_s);
    let mesh = triangulate(&sample, true).with_context(|| format!("triangulating {name}"))?;
    let mut files = Vec::new();
    for format in &cfg.formats {
        let path = cfg.out.join(format!("{stem}.{}", format.ext()));
        match format {
            Format::Obj => write_obj(&mesh, &path)?,
            Format::Ply => write_ply(&mesh, &path)?,
            Format::Csv => write_csv(&sample, &path)?,
        }
        files.push(path);
    }
    Ok(Rendered { sample, mesh, files })
}

fn create_out(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))
        .map_err(Failure::Runtime)
}

pub fn surface(cfg: &RunConfig, name: &str, grid: Option<GridSpec>, allow_nonminimal: bool) -> CmdResult {
    let cat = load_catalog(cfg)?;
    let (label, g) = resolve(&cat, name)?;
    let x = g
        .as_contact()
        .ok_or_else(|| Failure::usage(format!("'{label}' depends on x, y or u; surfaces need a generator in (p, q)")))?;
    let from_catalog = cat.get(name).is_ok();
    let solution = x.is_solution();
    if !solution && !allow_nonminimal {
        return Err(Failure::Verification(format!(
            "'{label}' does not solve the linearised equation (residual {}); pass --allow-nonminimal to export it anyway",
            x.pde_residual()
        )));
    }
    let spec = grid.unwrap_or_else(|| cfg.grid_for(&label));
    create_out(&cfg.out)?;
    let r = render(&x, &label, &stem(&label, from_catalog), &spec, cfg).map_err(Failure::Runtime)?;
    println!(
        "{label}: grid {spec}, {} points, {} singular, {} triangles",
        r.sample.points.len(),
        r.sample.singular_count,
        r.mesh.triangles.len()
    );
    println!("maxAbsH {:.6e} (tol {:e})", r.sample.max_abs_h, cfg.tol_h);
    for f in &r.files {
        println!("wrote {}", f.display());
    }
    let mut ok = !solution || r.sample.max_abs_h < cfg.tol_h;
    if !solution {
        println!("non-solution surface: curvature reported, not checked");
    }
    if label == "phi5" {
        let dev = helicoid_check(&r.sample).map_err(|e| Failure::Runtime(e.into()))?;
        println!("helicoid deviation max |z - x tan y| = {dev:.6e}");
        ok &= dev < 1e-12;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{label}: surface checks failed")))
    }
}

pub fn gallery(cfg: &RunConfig, only: &[String]) -> CmdResult {
    let cat = load_catalog(cfg)?;
    let names: Vec<String> = if only.is_empty() {
        GALLERY.iter().map(|s| s.to_string()).collect()
    } else {
        only.to_vec()
    };
    let mut jobs = Vec::with_capacity(names.len());
    for name in &names {
        let x = cat.get_contact(name).map_err(|e| Failure::usage(format!("gallery: {e}")))?;
        jobs.push((name.clone(), x));
    }
    create_out(&cfg.out)?;
    let results: Vec<anyhow::Result<(String, ContactExpr, GridSpec, Rendered)>> = jobs
        .into_par_iter()
        .map(|(name, x)| {
            let spec = cfg.grid_for(&name);
            let r = render(&x, &name, &name, &spec, cfg).with_context(|| format!("gallery surface {name}"))?;
            if r.sample.max_abs_h >= cfg.tol_h {
                return Err(anyhow!(
                    "gallery surface {name}: maxAbsH {:e} exceeds tolerance {:e}",
                    r.sample.max_abs_h,
                    cfg.tol_h
                ));
            }
            Ok((name, x, spec, r))
        })
        .collect();
    let mut manifest = format!("{GALLERY_HEADER}\nname\texpression\tgrid\tvertices\ttriangles\tsingular\tmax_abs_h\tfiles\n");
    let mut failure = None;
    for result in results {
        match result {
            Ok((name, x, spec, r)) => {
                let files: Vec<String> = r
                    .files
                    .iter()
                    .filter_map(|f| f.file_name().map(|s| s.to_string_lossy().into_owned()))
                    .collect();
                println!(
                    "{name}: grid {spec}, maxAbsH {:.3e}, singular {}, {} triangles",
                    r.sample.max_abs_h,
                    r.sample.singular_count,
                    r.mesh.triangles.len()
                );
                let _ = writeln!(
                    manifest,
                    "{name}\t{x}\t{spec}\t{}\t{}\t{}\t{:.6e}\t{}",
                    r.mesh.vertices.len(),
                    r.mesh.triangles.len(),
                    r.sample.singular_count,
                    r.sample.max_abs_h,
                    files.join(",")
                );
            }
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    if let Some(e) = failure {
        return Err(Failure::Runtime(e));
    }
    let path = cfg.out.join(GALLERY_MANIFEST);
    std::fs::write(&path, manifest)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Runtime)?;
    println!("wrote {}", path.display());
    Ok(())
}
