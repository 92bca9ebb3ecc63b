"""
Main application entry point for the anyon phase-transition service.
"""
import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from api import router as api_router
from catalog import builtin_entries
from config import APP_VERSION, PORT, configure_logging
from presets import preset_names
from tasks import shutdown_pool

configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(
    title="Anyon Phase Transition API",
    description="Quantum-double modular data, flavor diagrams and label-forbidding transitions",
    version=APP_VERSION,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(api_router)


@app.on_event("shutdown")
async def shutdown():
    shutdown_pool()


@app.get("/")
async def root():
    """API health check endpoint"""
    return {
        "status": "online",
        "message": "Anyon phase transition API is running",
        "version": APP_VERSION,
        "groups": preset_names(),
        "catalog": [e.name for e in builtin_entries()],
        "endpoints": {
            "theory": "/api/groups/{name}/theory",
            "diagram": "/api/groups/{name}/diagram",
            "phases": "/api/groups/{name}/phases",
            "forbid": "/api/forbid",
            "catalog": "/api/catalog",
        },
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run("main:app", host="0.0.0.0", port=PORT, reload=True)
