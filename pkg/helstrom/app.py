"""
FastAPI Service for the Qubit Discrimination Toolkit

This service exposes REST APIs for:
1. Helstrom and no-signalling bounds
2. Scenario construction and steering measurements
3. Detector scans, black-box analysis and protocol simulation

Vector parameters use the `x,y,z` format of the command line.
"""

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel
from typing import Dict, Optional
from contextlib import asynccontextmanager
import logging

from .config import TOLERANCES, load_simulation_defaults, log_level
from .models.discrimination import detector_from_dict, helstrom_bound, helstrom_detector
from .models.errors import ToolkitError
from .models.nosignal import BlackBoxResponse, blackbox_report, nosignal_error_bound
from .models.qubit import BlochVector, trace_norm_distance
from .models.scenario import Scenario, build_scenario, verify_ensemble_equality
from .models.steering import alice_measurements
from .services.scan import MIN_GRID, scan_detectors
from .services.simulation import SimConfig, run_protocol

logger = logging.getLogger(__name__)

SIMULATION_DEFAULTS = load_simulation_defaults()


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan events"""
    logging.basicConfig(level=log_level("INFO"))
    logger.info("🚀 Discrimination toolkit service starting up...")
    yield
    logger.info("🔄 Discrimination toolkit service shutting down...")


app = FastAPI(
    title="Qubit Discrimination Toolkit API",
    description="Helstrom bound, ensemble steering and the no-signalling bound for qubit states",
    version="1.0.0",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class BlackBoxRequest(BaseModel):
    """Body of POST /api/blackbox"""
    scenario: Dict
    responses: Dict


# === Utility Functions ===

def parse_vector(text: str, name: str) -> BlochVector:
    try:
        return BlochVector.parse(text)
    except ToolkitError as e:
        raise HTTPException(status_code=400, detail=f"Invalid {name}: {e}")


def scenario_from_query(r0: str, r1: str) -> Scenario:
    return build_scenario(parse_vector(r0, "r0"), parse_vector(r1, "r1"))


def domain_error(e: ToolkitError) -> HTTPException:
    logger.warning(f"⚠️ Rejected request: {type(e).__name__}: {e}")
    return HTTPException(status_code=400, detail=f"{type(e).__name__}: {e}")


def internal_error(action: str, e: Exception) -> HTTPException:
    logger.error(f"❌ Error {action}: {str(e)}")
    return HTTPException(status_code=500, detail=f"Failed {action}: {str(e)}")


# === API Endpoints ===

@app.get("/")
async def root():
    """Root endpoint with API information"""
    return {
        "name": "Qubit Discrimination Toolkit API",
        "version": "1.0.0",
        "endpoints": {
            "bound": "/api/bound",
            "scenario": "/api/scenario",
            "steer": "/api/steer",
            "scan": "/api/scan",
            "blackbox": "/api/blackbox",
            "simulate": "/api/simulate",
        },
    }


@app.get("/api/bound")
async def get_bound(
    r0: str = Query(..., description="Bloch vector of rho0 as x,y,z"),
    r1: str = Query(..., description="Bloch vector of rho1 as x,y,z"),
):
    """Helstrom bound, plus the no-signalling floor when the states differ"""
    try:
        v0, v1 = parse_vector(r0, "r0"), parse_vector(r1, "r1")
        result = {"r0": v0.to_list(), "r1": v1.to_list(), "helstrom_bound": helstrom_bound(v0, v1)}
        if v0.distance(v1) >= TOLERANCES.degenerate:
            result["nosignal_bound"] = nosignal_error_bound(build_scenario(v0, v1))
        return result
    except HTTPException:
        raise
    except ToolkitError as e:
        raise domain_error(e)
    except Exception as e:
        raise internal_error("computing bound", e)


@app.get("/api/scenario")
async def get_scenario(
    r0: str = Query(..., description="Bloch vector of rho0 as x,y,z"),
    r1: str = Query(..., description="Bloch vector of rho1 as x,y,z"),
    geometry: bool = Query(False, description="Include Bloch-plane coordinates"),
):
    """Equal-average ensemble scenario document"""
    try:
        scenario = scenario_from_query(r0, r1)
        document = scenario.to_dict()
        document["residual"] = verify_ensemble_equality(scenario)
        if geometry:
            document["plane_coordinates"] = scenario.plane_coordinates()
        return document
    except HTTPException:
        raise
    except ToolkitError as e:
        raise domain_error(e)
    except Exception as e:
        raise internal_error("building scenario", e)


@app.get("/api/steer")
async def get_steering(
    r0: str = Query(..., description="Bloch vector of rho0 as x,y,z"),
    r1: str = Query(..., description="Bloch vector of rho1 as x,y,z"),
):
    """Purification of rho_B and Alice's measurements M0, M1"""
    try:
        scenario = scenario_from_query(r0, r1)
        psi, m0, m1 = alice_measurements(scenario)
        return {
            "scenario": scenario.to_dict(),
            "purification": psi.to_dict(),
            "M0": m0.to_dict(),
            "M1": m1.to_dict(),
            "marginal_error": max(
                trace_norm_distance(m.unconditioned_state(psi), scenario.average) for m in (m0, m1)
            ),
        }
    except HTTPException:
        raise
    except ToolkitError as e:
        raise domain_error(e)
    except Exception as e:
        raise internal_error("building steering measurements", e)


@app.get("/api/scan")
async def get_scan(
    r0: str = Query(..., description="Bloch vector of rho0 as x,y,z"),
    r1: str = Query(..., description="Bloch vector of rho1 as x,y,z"),
    grid: int = Query(64, ge=MIN_GRID, le=128, description="Points per grid dimension"),
):
    """Grid search over binary POVMs"""
    try:
        return scan_detectors(scenario_from_query(r0, r1), grid).to_dict()
    except HTTPException:
        raise
    except ToolkitError as e:
        raise domain_error(e)
    except Exception as e:
        raise internal_error("scanning detectors", e)


@app.post("/api/blackbox")
async def post_blackbox(request: BlackBoxRequest):
    """Bound chain for a black-box detector"""
    try:
        scenario = Scenario.from_dict(request.scenario)
        report = blackbox_report(BlackBoxResponse.from_dict(request.responses), scenario)
        return report.to_dict()
    except ToolkitError as e:
        raise domain_error(e)
    except Exception as e:
        raise internal_error("evaluating black box", e)


@app.get("/api/simulate")
async def get_simulation(
    r0: str = Query(..., description="Bloch vector of rho0 as x,y,z"),
    r1: str = Query(..., description="Bloch vector of rho1 as x,y,z"),
    rounds: int = Query(SIMULATION_DEFAULTS.rounds, ge=1, le=SIMULATION_DEFAULTS.max_service_rounds),
    seed: int = Query(SIMULATION_DEFAULTS.seed, ge=0, lt=2 ** 64),
    threads: int = Query(SIMULATION_DEFAULTS.threads, ge=1, le=16),
    detector_a: Optional[float] = Query(None, ge=0.0, le=1.0, description="POVM a; Helstrom measurement if omitted"),
    detector_b: Optional[str] = Query(None, description="POVM b as x,y,z"),
):
    """Monte-Carlo run of the steering protocol"""
    try:
        scenario = scenario_from_query(r0, r1)
        if detector_a is None:
            detector = helstrom_detector(scenario.r0, scenario.r1)
        else:
            b = parse_vector(detector_b or "0,0,0", "detector_b")
            detector = detector_from_dict({"kind": "povm", "a": detector_a, "b": b.to_list()})
        report = run_protocol(SimConfig(
            scenario=scenario, detector=detector, rounds=rounds, seed=seed, threads=threads,
        ))
        return report.to_dict()
    except HTTPException:
        raise
    except ToolkitError as e:
        raise domain_error(e)
    except Exception as e:
        raise internal_error("running simulation", e)


@app.get("/health")
async def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "tolerances": {"algebra": TOLERANCES.algebra, "degenerate": TOLERANCES.degenerate},
        "max_simulation_rounds": SIMULATION_DEFAULTS.max_service_rounds,
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "helstrom.app:app",
        host="0.0.0.0",
        port=8000,
        reload=True,
        log_level="info",
    )
