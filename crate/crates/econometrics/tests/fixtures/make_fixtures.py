"""Reference fits for the estimator tests, computed with statsmodels and scipy."""
import json

import numpy as np
import statsmodels.api as sm
from scipy import optimize, stats
from statsmodels.tools.numdiff import approx_fprime, approx_hess

rng = np.random.default_rng(575)
n, g = 120, 12
x1 = rng.normal(size=n)
x2 = rng.uniform(size=n)
d1 = (rng.uniform(size=n) < 0.35).astype(float)
cluster = np.repeat(np.arange(g), n // g)
mu = stats.norm.cdf((0.4 * x1 - 0.8 * x2 - 0.3) / np.exp(0.5 * d1))
y = rng.beta(mu * 15, (1 - mu) * 15)
X = np.column_stack([x1, x2, np.ones(n)])
Z = d1[:, None]

np.savetxt("data.csv", np.column_stack([y, x1, x2, d1, cluster]), delimiter=",",
           header="y,x1,x2,d1,cluster", comments="", fmt="%.17g")

out = {}
ols = sm.OLS(y, X)
out["ols"] = {
    "params": ols.fit().params.tolist(),
    "se_classical": ols.fit().bse.tolist(),
    "se_hc0": ols.fit(cov_type="HC0").bse.tolist(),
    "se_cluster": ols.fit(cov_type="cluster", cov_kwds={"groups": cluster}).bse.tolist(),
    "r2_adj": ols.fit().rsquared_adj,
    "llf": ols.fit().llf,
    "aic": ols.fit().aic,
    "bic": ols.fit().bic,
}

probit = sm.families.links.Probit()
glm = sm.GLM(y, X, family=sm.families.Binomial(link=probit))
res = glm.fit(method="newton", tol=1e-14, maxiter=200)
cl = glm.fit(method="newton", tol=1e-14, maxiter=200, cov_type="cluster", cov_kwds={"groups": cluster})
hc0 = glm.fit(method="newton", tol=1e-14, maxiter=200, cov_type="HC0")
out["glm"] = {
    "params": res.params.tolist(),
    "se_classical": res.bse.tolist(),
    "se_hc0": hc0.bse.tolist(),
    "se_cluster": cl.bse.tolist(),
    "llf": float(np.sum(y * np.log(res.mu) + (1 - y) * np.log(1 - res.mu))),
}


def hetprob_llf(theta):
    b, c = theta[:3], theta[3:]
    m = stats.norm.cdf(X @ b / np.exp(Z @ c))
    return np.sum(y * np.log(m) + (1 - y) * np.log1p(-m))


start = np.concatenate([res.params, [0.0]])
opt = optimize.minimize(lambda t: -hetprob_llf(t), start, method="BFGS",
                        jac=lambda t: -approx_fprime(t, hetprob_llf, centered=True),
                        options={"gtol": 1e-10, "maxiter": 1000})
theta = opt.x
for _ in range(5):
    grad = approx_fprime(theta, hetprob_llf, centered=True)
    hess = approx_hess(theta, hetprob_llf)
    theta = theta - np.linalg.solve(hess, grad)
hess = approx_hess(theta, hetprob_llf)
bread = np.linalg.inv(-hess)
scores = np.array([approx_fprime(theta, lambda t, i=i: (
    lambda m: y[i] * np.log(m) + (1 - y[i]) * np.log1p(-m))(
    stats.norm.cdf(X[i] @ t[:3] / np.exp(Z[i] @ t[3:]))), centered=True) for i in range(n)])
sums = np.array([scores[cluster == k].sum(axis=0) for k in range(g)])
k = theta.size
factor = g / (g - 1) * (n - 1) / (n - k)
out["fhetprob"] = {
    "params": theta.tolist(),
    "se_classical": np.sqrt(np.diag(bread)).tolist(),
    "se_cluster": np.sqrt(np.diag(factor * bread @ sums.T @ sums @ bread)).tolist(),
    "llf": hetprob_llf(theta),
}
with open("expected.json", "w") as f:
    json.dump(out, f, indent=2)
