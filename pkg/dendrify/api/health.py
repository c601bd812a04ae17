from fastapi import APIRouter

from ..config import settings
from ..schemas import HealthResponse
from ..version import get_version

router = APIRouter(tags=["health"])


@router.get("/health", response_model=HealthResponse)
def health_check():
    return HealthResponse(version=get_version(), cell_budget=settings.cell_budget)
