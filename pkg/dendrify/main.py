"""
Dendrify — polygonal dendrite validator and Hölder certificate service
FastAPI entry point
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from .config import settings
from .api import health, systems
from .version import get_version

logging.basicConfig(
    level=settings.log_level,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(
        "Dendrify %s started on %s:%d (cell budget %d)",
        get_version(), settings.host, settings.port, settings.cell_budget,
    )
    yield
    logger.info("Shutting down")


app = FastAPI(
    title="Dendrify",
    description="Validate self-affine polygonal dendrites and certify Hölder arcs",
    version=get_version(),
    lifespan=lifespan,
    docs_url="/api/docs",
    redoc_url="/api/redoc",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)


# -- API routers ---------------------------------------------------------------

app.include_router(systems.router, prefix="/api")
app.include_router(health.router, prefix="/api")
