import pytest

from harmonic_smile import SsviParams, SviParams, ssvi_smile, ssvi_surface, svi_smile

SVI_LEFT = SviParams(a=0.04, b=0.4, rho=-0.7, m=0.1, sigma=0.2)
SSVI_RIGHT = SsviParams(theta=0.25, phi=3.0, rho=0.7)


@pytest.fixture(scope="session")
def svi_left():
    return svi_smile(SVI_LEFT)


@pytest.fixture(scope="session")
def ssvi_right():
    return ssvi_smile(SSVI_RIGHT)


@pytest.fixture(scope="session", params=["svi", "ssvi"])
def reference_smile(request, svi_left, ssvi_right):
    return svi_left if request.param == "svi" else ssvi_right


@pytest.fixture(scope="session")
def surface():
    return ssvi_surface(0.09, 4.0, -0.8)
