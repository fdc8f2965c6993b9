"""
Focusing design table and spectral bookkeeping
==============================================

Walks the optical design numbers: Rayleigh lengths for the pump and the
two collection modes, the energy-matched partner wavelength, and the
wavelength/frequency bandwidth conversions for the pair spectra.
"""

import numpy as np

from pairlink.photonics import (
    SpectralShape,
    Wavelength,
    bandwidth_lambda_to_nu,
    bandwidth_nu_to_lambda,
    rayleigh_length,
    spdc_partner_wavelength,
    spectral_density,
)

# the focusing design: one waist per wavelength, chosen so all three beams
# stay collimated over the same crystal length
design = [
    ("pump", 532.0, 200.0),
    ("signal", 810.0, 145.0),
    ("idler", 1550.0, 140.0),
]

print("beam      wavelength    waist    Rayleigh length")
for name, wl_nm, waist_um in design:
    zr = rayleigh_length(waist_um * 1e-6, wl_nm * 1e-9)
    print(f"{name:8s} {wl_nm:8.0f} nm {waist_um:6.0f} um {zr * 1e3:10.1f} mm")

# energy conservation fixes the idler wavelength once pump and signal are
# chosen; the collection optics are cut for exactly this line
partner = spdc_partner_wavelength(Wavelength.from_nm(532), Wavelength.from_nm(810))
print(f"\npartner of 810 nm under a 532 nm pump: {partner.nm:.4f} nm")

# a 2.3 nm filter at 1550 nm and its frequency-domain width
d_nu = bandwidth_lambda_to_nu(2.3e-9, Wavelength.from_nm(1550))
print(f"2.3 nm at 1550 nm = {d_nu / 1e9:.1f} GHz")

# the same frequency width looks much narrower in wavelength at 810 nm
d_lam = bandwidth_nu_to_lambda(d_nu, Wavelength.from_nm(810))
print(f"{d_nu / 1e9:.1f} GHz at 810 nm  = {d_lam * 1e9:.3f} nm")

# phase matching gives a sinc^2 marginal spectrum; sample it and confirm
# the half-maximum points sit one FWHM apart
center = 193.4e12  # the 1550 nm line
shape = SpectralShape(center_frequency=center, fwhm_bandwidth=d_nu, shape="sinc2")
detuning = np.linspace(-2.0 * d_nu, 2.0 * d_nu, 9)
print("\ndetuning (GHz)   relative density")
for x, y in zip(detuning, spectral_density(shape, center + detuning)):
    print(f"{x / 1e9:12.1f} {y:18.4f}")
half = spectral_density(shape, center + 0.5 * d_nu)
print(f"density at +/- fwhm/2: {half:.6f} (0.5 expected)")
