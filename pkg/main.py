import logging
from typing import Any, Dict

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse

from src.agents.coordinator_agent import CoordinatorAgent
from src.config import configure_logging, get_settings
from src.models.errors import PinvError
from src.models.types import AnalysisRequest, AnalysisResult, CanonicalizeRequest, CliConfig, Command
from src.tools.serialization import parse_blocks

configure_logging()
logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Parabolic Invariants Service",
    description="Bases, invariants and canonical B-orbit representatives for parabolic nilradicals in gl(n)",
    version="1.0.0",
)

# Initialize the coordinator agent
coordinator = CoordinatorAgent()


def _respond(result: AnalysisResult) -> Any:
    if result.status == "error":
        return JSONResponse(status_code=400, content={"success": False, "error": result.error})
    return {"success": True, "data": result.model_dump(mode="json")}


def _run(config: CliConfig, point: Dict[str, Any] = None) -> Any:
    try:
        return _respond(coordinator.run(config, point))
    except PinvError as e:
        return JSONResponse(status_code=400, content={"success": False, "error": str(e)})
    except Exception as e:
        logger.exception("unexpected failure")
        return JSONResponse(status_code=500, content={"success": False, "error": str(e)})


@app.get("/api/health")
async def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "service": "Parabolic Invariants Service"}


@app.post("/api/diagram")
async def diagram(request: AnalysisRequest):
    """
    Render the diagram of a block structure

    Args:
        request: Block sizes, output format and cell selection

    Returns:
        The diagram text in data.output
    """
    return _run(CliConfig(blocks=tuple(request.blocks), command=Command.DIAGRAM,
                          format=request.format, which=request.which))


@app.post("/api/invariants")
async def invariants(request: AnalysisRequest):
    """Construct the invariant family of a block structure"""
    return _run(CliConfig(blocks=tuple(request.blocks), command=Command.INVARIANTS,
                          format=request.format, which=request.which))


@app.post("/api/canonicalize")
async def canonicalize(request: CanonicalizeRequest):
    """Canonical representative of the B-orbit of a point"""
    return _run(CliConfig(blocks=tuple(request.blocks), command=Command.CANONICALIZE), request.point)


@app.get("/api/orbit-dimension")
async def orbit_dimension(blocks: str = Query(..., description="comma-separated block sizes")):
    """Dimension of a B-orbit in general position"""
    try:
        sizes = parse_blocks(blocks)
    except PinvError as e:
        return JSONResponse(status_code=400, content={"success": False, "error": str(e)})
    return _run(CliConfig(blocks=sizes, command=Command.ORBIT_DIM))


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=get_settings().port)
